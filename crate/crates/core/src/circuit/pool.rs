use crate::chem::IntegralSet;
use crate::error::{Error, Result};
use crate::hamiltonian::{spin_orbital, EncodedProblem, Ladder, MixedOperator};
use crate::pauli::PauliSum;

use Ladder::{Annihilate as A, Create as C};

/// Excitation classes of the truncated polaritonic cluster operator, in
/// synthesis order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub enum ExcitationClass {
    ElectronicSingle,
    PhotonCreation,
    MixedSingle,
    ElectronicDouble,
    MixedDouble,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoolEntry {
    pub label: String,
    pub class: ExcitationClass,
    /// Encoded `T − T†`; anti-Hermitian.
    pub generator: PauliSum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorPool {
    pub n_qubits: usize,
    pub entries: Vec<PoolEntry>,
    /// Labels of excitations removed because they break a tapered symmetry
    /// or are proportional to an earlier generator.
    pub dropped: Vec<String>,
}

impl GeneratorPool {
    pub fn len(&self) -> usize {
        self.entries.len()
    }
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
    pub fn labels(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.label.clone()).collect()
    }
}

/// Whether `b = s·a` for some scalar `s`.
fn proportional(a: &PauliSum, b: &PauliSum) -> bool {
    if a.len() != b.len() || a.is_empty() {
        return false;
    }
    let (ca, pa) = a.iter().next().expect("nonempty");
    let s = b.coefficient(&pa) / ca;
    s.norm() > 0.0 && b.sub(&a.scale(s)).map(|d| d.one_norm() < 1e-10 * b.one_norm()).unwrap_or(false)
}

/// Build the polaritonic UCC pool: electronic singles, photon creation,
/// mixed singles, electronic doubles and mixed doubles, each encoded as
/// `T − T†` with the same plan as `problem`.
///
/// α and β singles share one parameter. Doubles run over spin-orbital pairs
/// that conserve `S_z`. Excitations that anticommute with a tapered
/// symmetry vanish from the pool.
pub fn build_pucc_pool(ints: &IntegralSet, problem: &EncodedProblem) -> Result<GeneratorPool> {
    let n = ints.n_spatial;
    let n_modes = 2 * n;
    if problem.n_fermion_qubits != n_modes {
        return Err(Error::EncodingMismatch(format!(
            "integrals have {n_modes} spin-orbitals, problem encodes {}",
            problem.n_fermion_qubits
        )));
    }
    let occ: Vec<usize> = ints.occupied.clone();
    let virt: Vec<usize> = (0..n).filter(|p| !occ.contains(p)).collect();
    let so = |p: usize, beta: bool| spin_orbital(p, beta, n);

    let mut raw: Vec<(String, ExcitationClass, MixedOperator)> = Vec::new();
    let single = |i: usize, a: usize, bosons: &[Ladder]| -> Result<MixedOperator> {
        let mut t = MixedOperator::new(n_modes);
        for s in [false, true] {
            t.push(1.0, &[(so(a, s), C), (so(i, s), A)], bosons)?;
        }
        Ok(t)
    };
    for &i in &occ {
        for &a in &virt {
            raw.push((format!("{i}->{a}"), ExcitationClass::ElectronicSingle, single(i, a, &[])?));
        }
    }
    let mut photon = MixedOperator::new(n_modes);
    photon.push(1.0, &[], &[C])?;
    raw.push(("b+".into(), ExcitationClass::PhotonCreation, photon));
    for &i in &occ {
        for &a in &virt {
            raw.push((format!("{i}->{a},b+"), ExcitationClass::MixedSingle, single(i, a, &[C])?));
        }
    }

    let occ_so: Vec<usize> = occ.iter().flat_map(|&i| [so(i, false), so(i, true)]).collect::<Vec<_>>();
    let virt_so: Vec<usize> = virt.iter().flat_map(|&a| [so(a, false), so(a, true)]).collect::<Vec<_>>();
    let mut sorted_occ = occ_so.clone();
    sorted_occ.sort_unstable();
    let mut sorted_virt = virt_so.clone();
    sorted_virt.sort_unstable();
    let sz = |p: usize| if p >= n { -1i32 } else { 1 };
    let mut doubles = Vec::new();
    for (x, &i) in sorted_occ.iter().enumerate() {
        for &j in &sorted_occ[x + 1..] {
            for (y, &a) in sorted_virt.iter().enumerate() {
                for &b in &sorted_virt[y + 1..] {
                    if sz(i) + sz(j) == sz(a) + sz(b) {
                        doubles.push((i, j, a, b));
                    }
                }
            }
        }
    }
    for (class, bosons, suffix) in [
        (ExcitationClass::ElectronicDouble, &[][..], ""),
        (ExcitationClass::MixedDouble, &[C][..], ",b+"),
    ] {
        for &(i, j, a, b) in &doubles {
            let mut t = MixedOperator::new(n_modes);
            t.push(1.0, &[(a, C), (b, C), (j, A), (i, A)], bosons)?;
            raw.push((format!("{i},{j}->{a},{b}{suffix}"), class, t));
        }
    }

    let mut entries: Vec<PoolEntry> = Vec::new();
    let mut dropped = Vec::new();
    for (label, class, t) in raw {
        let g = match problem.encode_if_symmetric(&t.anti_hermitian_part())? {
            Some(g) if !g.is_empty() => g,
            _ => {
                dropped.push(label);
                continue;
            }
        };
        if !g.is_anti_hermitian(1e-12) {
            return Err(Error::NotAntiHermitian);
        }
        if entries.iter().any(|e| proportional(&e.generator, &g)) {
            dropped.push(label);
            continue;
        }
        entries.push(PoolEntry { label, class, generator: g });
    }
    Ok(GeneratorPool { n_qubits: problem.n_qubits, entries, dropped })
}

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::mixed::{Ladder, MixedOperator};
use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum, MAX_QUBITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FermionMapping {
    #[serde(alias = "jordan-wigner")]
    Jw,
    #[serde(alias = "bravyi-kitaev")]
    Bk,
}

impl std::fmt::Display for FermionMapping {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FermionMapping::Jw => "JW",
            FermionMapping::Bk => "BK",
        })
    }
}

/// A linear fermion-to-qubit encoding: qubit bits are `b = β·n (mod 2)`
/// for occupation vector `n`. Row `i` of `β` is stored as a bitmask over
/// modes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearEncoding {
    n: usize,
    beta: Vec<u64>,
    beta_inv: Vec<u64>,
}

impl LinearEncoding {
    pub fn new(beta: Vec<u64>) -> Result<Self> {
        let n = beta.len();
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits { n, limit: MAX_QUBITS });
        }
        let beta_inv = gf2_inverse(&beta)
            .ok_or_else(|| Error::InvalidInput("encoding matrix is singular over GF(2)".into()))?;
        Ok(Self { n, beta, beta_inv })
    }

    pub fn jordan_wigner(n: usize) -> Self {
        Self::new((0..n).map(|i| 1u64 << i).collect()).expect("identity is invertible")
    }

    /// Fenwick-tree encoding: qubit `i` stores the parity of modes
    /// `i − lowbit(i+1) + 1 ..= i`.
    pub fn bravyi_kitaev(n: usize) -> Self {
        let beta = (0..n)
            .map(|i| {
                let low = (i + 1) & (!(i + 1) + 1);
                (i + 1 - low..=i).fold(0u64, |m, j| m | 1 << j)
            })
            .collect();
        Self::new(beta).expect("Fenwick matrix is unit lower triangular")
    }

    pub fn for_mapping(mapping: FermionMapping, n: usize) -> Self {
        match mapping {
            FermionMapping::Jw => Self::jordan_wigner(n),
            FermionMapping::Bk => Self::bravyi_kitaev(n),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n
    }
    pub fn beta_rows(&self) -> &[u64] {
        &self.beta
    }

    /// Qubit bitstring of an occupation bitmask.
    pub fn encode_occupation(&self, occ: u64) -> u64 {
        self.beta
            .iter()
            .enumerate()
            .fold(0, |b, (i, row)| b | (((row & occ).count_ones() as u64 & 1) << i))
    }

    /// Z-mask whose string measures the parity of the modes in `modes`.
    pub fn parity_mask(&self, modes: u64) -> u64 {
        (0..self.n).filter(|j| modes >> j & 1 == 1).fold(0, |u, j| u ^ self.beta_inv[j])
    }

    fn z_string(&self, mask: u64) -> PauliString {
        PauliString::from_masks(self.n, 0, mask).expect("mask in range")
    }

    /// `n_j = (I − Z^{r_j})/2`.
    pub fn number(&self, j: usize) -> PauliSum {
        let mut s = PauliSum::identity(self.n, 0.5);
        s.add_term(Complex64::new(-0.5, 0.0), &self.z_string(self.beta_inv[j]));
        s
    }

    /// `a†_j = X^{col_j} Z^{p_j} (I + Z^{r_j})/2`, where `col_j` flips every
    /// qubit that stores mode `j`, `p_j` measures the parity of modes `< j`
    /// and `r_j` measures `n_j`.
    pub fn creation(&self, j: usize) -> Result<PauliSum> {
        if j >= self.n {
            return Err(Error::IndexOutOfRange { index: j, len: self.n });
        }
        let col = self.beta.iter().enumerate().fold(0u64, |c, (i, row)| c | ((row >> j & 1) << i));
        let p = self.parity_mask((1u64 << j) - 1);
        // X^c Z^p = i^{-|c∧p|} · (letter string)
        let phase = (4 - (col & p).count_ones() % 4) as u8 % 4;
        let xz = PauliString::from_masks(self.n, col, p)?.with_phase(phase);
        let lead = PauliSum::from_string(Complex64::new(1.0, 0.0), &xz);
        let mut proj = PauliSum::identity(self.n, 0.5);
        proj.add_term(Complex64::new(0.5, 0.0), &self.z_string(self.beta_inv[j]));
        lead.mul(&proj)
    }

    pub fn ladder(&self, j: usize, l: Ladder) -> Result<PauliSum> {
        let c = self.creation(j)?;
        Ok(match l {
            Ladder::Create => c,
            Ladder::Annihilate => c.adjoint(),
        })
    }
}

fn gf2_inverse(rows: &[u64]) -> Option<Vec<u64>> {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut inv: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r] >> col & 1 == 1)?;
        a.swap(col, piv);
        inv.swap(col, piv);
        for r in 0..n {
            if r != col && a[r] >> col & 1 == 1 {
                a[r] ^= a[col];
                inv[r] ^= inv[col];
            }
        }
    }
    Some(inv)
}

/// Fermion-mapped operator: each distinct boson word carries the Pauli sum
/// multiplying it; the boson factors are left for [`encode_bosons`].
///
/// [`encode_bosons`]: super::encode_bosons
#[derive(Debug, Clone, PartialEq)]
pub struct FermionMapped {
    pub n_qubits: usize,
    pub constant: f64,
    pub parts: BTreeMap<Vec<Ladder>, PauliSum>,
}

/// Map every fermionic word through `enc`.
pub fn map_fermions(op: &MixedOperator, enc: &LinearEncoding) -> Result<FermionMapped> {
    if op.n_modes() != enc.n_modes() {
        return Err(Error::EncodingMismatch(format!(
            "operator has {} modes, encoding {}",
            op.n_modes(),
            enc.n_modes()
        )));
    }
    let n = enc.n_modes();
    let mut cache: BTreeMap<(usize, Ladder), PauliSum> = BTreeMap::new();
    let mut parts: BTreeMap<Vec<Ladder>, PauliSum> = BTreeMap::new();
    for t in op.terms() {
        let mut acc = PauliSum::identity(n, 1.0);
        for &(j, l) in &t.fermions {
            if !cache.contains_key(&(j, l)) {
                cache.insert((j, l), enc.ladder(j, l)?);
            }
            acc = acc.mul(&cache[&(j, l)])?;
        }
        let slot = parts.entry(t.bosons.clone()).or_insert_with(|| PauliSum::zero(n));
        *slot = slot.add(&acc.scale(t.coeff))?;
    }
    parts.retain(|_, s| !s.is_empty());
    Ok(FermionMapped { n_qubits: n, constant: op.constant(), parts })
}

pub fn map_fermions_jw(op: &MixedOperator) -> Result<FermionMapped> {
    map_fermions(op, &LinearEncoding::jordan_wigner(op.n_modes()))
}

pub fn map_fermions_bk(op: &MixedOperator) -> Result<FermionMapped> {
    map_fermions(op, &LinearEncoding::bravyi_kitaev(op.n_modes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fenwick_rows() {
        let bk = LinearEncoding::bravyi_kitaev(4);
        assert_eq!(bk.beta_rows(), &[0b0001, 0b0011, 0b0100, 0b1111]);
        let bk8 = LinearEncoding::bravyi_kitaev(8);
        assert_eq!(bk8.beta_rows()[7], 0xff);
        assert_eq!(bk8.beta_rows()[5], 0b0011_0000);
    }

    #[test]
    fn jw_creation_on_mode_zero() {
        let a0 = LinearEncoding::jordan_wigner(4).creation(0).unwrap();
        let want = PauliSum::from_labels([(0.5, "XIII")])
            .unwrap()
            .add(&PauliSum::from_string(Complex64::new(0.0, -0.5), &PauliString::from_label("YIII").unwrap()))
            .unwrap();
        assert_eq!(a0, want);
    }

    #[test]
    fn jw_number_operator() {
        let enc = LinearEncoding::jordan_wigner(4);
        for p in 0..4 {
            let a = enc.creation(p).unwrap();
            let n = a.mul(&a.adjoint()).unwrap();
            assert_eq!(n, enc.number(p));
            assert_eq!(n.coefficient(&PauliString::single(4, p, crate::pauli::Pauli::Z)), Complex64::new(-0.5, 0.0));
        }
    }

    #[test]
    fn anticommutation_relations() {
        for enc in [LinearEncoding::jordan_wigner(4), LinearEncoding::bravyi_kitaev(4), LinearEncoding::bravyi_kitaev(6)] {
            let n = enc.n_modes();
            for i in 0..n {
                for j in 0..n {
                    let ai = enc.creation(i).unwrap();
                    let aj = enc.creation(j).unwrap();
                    let cc = ai.mul(&aj).unwrap().add(&aj.mul(&ai).unwrap()).unwrap();
                    assert!(cc.is_empty(), "{{a†{i}, a†{j}}} ≠ 0");
                    let ca = ai.mul(&aj.adjoint()).unwrap().add(&aj.adjoint().mul(&ai).unwrap()).unwrap();
                    let want = if i == j { PauliSum::identity(n, 1.0) } else { PauliSum::zero(n) };
                    assert_eq!(ca, want, "{{a†{i}, a{j}}}");
                }
            }
        }
    }

    #[test]
    fn occupation_encoding() {
        let bk = LinearEncoding::bravyi_kitaev(4);
        // modes 0 and 2 occupied
        assert_eq!(bk.encode_occupation(0b0101), 0b0111);
        assert_eq!(LinearEncoding::jordan_wigner(4).encode_occupation(0b0101), 0b0101);
        // α parity lives on qubit 1, total parity on qubit 3
        assert_eq!(bk.parity_mask(0b0011), 0b0010);
        assert_eq!(bk.parity_mask(0b1111), 0b1000);
    }
}

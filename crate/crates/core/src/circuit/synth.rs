use super::gate::{Angle, Gate};
use super::ir::Circuit;
use super::pool::GeneratorPool;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

/// Two-qubit Clifford with one CNOT whose conjugation sends every real
/// antisymmetric two-qubit Pauli (odd number of Y) to a weight-one Pauli.
pub const MAGIC_BASIS: [Gate; 4] =
    [Gate::Cnot { control: 0, target: 1 }, Gate::H(0), Gate::S(0), Gate::S(1)];

/// `M† P M` by propagating through the Clifford gate list of `M`.
pub fn conjugate_by_gates(gates: &[Gate], p: &PauliString) -> Option<PauliString> {
    gates.iter().rev().try_fold(*p, |acc, g| g.conjugate(&acc))
}

/// Gates (in time order) for `exp(i φ P)` with `φ = scale · θ[slot]`,
/// via basis change and a CNOT staircase onto the highest qubit.
fn pauli_rotation(p: &PauliString, slot: usize, scale: f64) -> Vec<Gate> {
    let qs: Vec<usize> = (0..p.n_qubits()).filter(|&q| p.support() >> q & 1 == 1).collect();
    let mut pre = Vec::new();
    for &q in &qs {
        match p.get(q) {
            Pauli::X => pre.push(Gate::H(q)),
            Pauli::Y => pre.extend([Gate::Sdg(q), Gate::H(q)]),
            _ => {}
        }
    }
    let ladder: Vec<Gate> = qs.windows(2).map(|w| Gate::Cnot { control: w[0], target: w[1] }).collect();
    let last = *qs.last().expect("non-identity string");
    let mut out = pre.clone();
    out.extend(ladder.iter().copied());
    // exp(iφZ) = RZ(−2φ)
    out.push(Gate::Rz(last, Angle::Param { slot, scale: -2.0 * scale }));
    out.extend(ladder.iter().rev().copied());
    out.extend(pre.iter().rev().map(Gate::inverse));
    out
}

/// One Trotter step `Π_k exp(θ_k G_k)` in pool order, each generator split
/// into its Pauli terms, preceded by X gates on `initial_bits`.
///
/// Two-qubit pools whose terms are all real antisymmetric are synthesized in
/// the magic basis: `M† · (single-qubit rotations) · M`, two CNOTs in total.
/// Everything else uses the CNOT staircase, `2(w−1)` CNOTs per weight-`w`
/// term.
pub fn synthesize(pool: &GeneratorPool, initial_bits: u64) -> Result<Circuit> {
    if pool.is_empty() {
        return Err(Error::InvalidInput("empty generator pool".into()));
    }
    let n = pool.n_qubits;
    let mut c = Circuit::new(n, pool.labels());
    for q in 0..n {
        if initial_bits >> q & 1 == 1 {
            c.push(Gate::X(q))?;
        }
    }
    let mut terms = Vec::new();
    for (slot, e) in pool.entries.iter().enumerate() {
        if !e.generator.is_anti_hermitian(1e-12) {
            return Err(Error::NotAntiHermitian);
        }
        for (coef, p) in e.generator.iter() {
            if p.is_identity() {
                continue;
            }
            // coefficient is i·a
            terms.push((slot, coef.im, p));
        }
    }

    let magic = n == 2 && terms.iter().all(|(_, _, p)| p.y_count() % 2 == 1);
    if magic {
        let local: Option<Vec<(usize, f64, PauliString)>> = terms
            .iter()
            .map(|&(slot, a, p)| {
                let q = conjugate_by_gates(&MAGIC_BASIS, &p)?;
                (q.weight() == 1 && q.phase() % 2 == 0).then(|| {
                    let sign = if q.phase() == 2 { -1.0 } else { 1.0 };
                    (slot, a * sign, q.with_phase(0))
                })
            })
            .collect();
        if let Some(local) = local {
            c.extend(MAGIC_BASIS.iter().rev().map(Gate::inverse))?;
            for (slot, a, q) in local {
                c.extend(pauli_rotation(&q, slot, a))?;
            }
            c.extend(MAGIC_BASIS)?;
            return Ok(c);
        }
    }
    for (slot, a, p) in terms {
        c.extend(pauli_rotation(&p, slot, a))?;
    }
    Ok(c)
}

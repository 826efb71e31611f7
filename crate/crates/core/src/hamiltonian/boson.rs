use num_complex::Complex64;

use super::fermion::FermionMapped;
use super::mixed::Ladder;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum};

/// Photon register layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BosonEncoding {
    /// Cutoff 1 only: `|n⟩` is the qubit state `|n⟩`.
    SingleQubit,
    /// One-hot over `cutoff + 1` qubits; qubit `j` in `|1⟩` holds `j` photons.
    Unary,
}

impl BosonEncoding {
    pub fn n_qubits(self, cutoff: usize) -> Result<usize> {
        match (self, cutoff) {
            (_, 0) => Err(Error::InvalidInput("photon cutoff must be at least 1".into())),
            (BosonEncoding::SingleQubit, 1) => Ok(1),
            (BosonEncoding::SingleQubit, c) => Err(Error::EncodingMismatch(format!(
                "single-qubit boson encoding needs cutoff 1, got {c}"
            ))),
            (BosonEncoding::Unary, c) => Ok(c + 1),
        }
    }

    /// Register bits of the photon vacuum.
    pub fn vacuum_bits(self) -> u64 {
        match self {
            BosonEncoding::SingleQubit => 0,
            BosonEncoding::Unary => 1,
        }
    }

    /// `b†` on the photon register alone.
    pub fn creation(self, cutoff: usize) -> Result<PauliSum> {
        let n = self.n_qubits(cutoff)?;
        let half = Complex64::new(0.5, 0.0);
        let ihalf = Complex64::new(0.0, 0.5);
        let single = |q: usize, p: Pauli| PauliString::single(n, q, p);
        Ok(match self {
            BosonEncoding::SingleQubit => {
                let mut s = PauliSum::zero(1);
                s.add_term(half, &single(0, Pauli::X));
                s.add_term(-ihalf, &single(0, Pauli::Y));
                s
            }
            BosonEncoding::Unary => {
                let mut out = PauliSum::zero(n);
                for j in 0..cutoff {
                    // |0⟩⟨1| on qubit j, |1⟩⟨0| on qubit j+1
                    let mut lo = PauliSum::zero(n);
                    lo.add_term(half, &single(j, Pauli::X));
                    lo.add_term(ihalf, &single(j, Pauli::Y));
                    let mut up = PauliSum::zero(n);
                    up.add_term(half, &single(j + 1, Pauli::X));
                    up.add_term(-ihalf, &single(j + 1, Pauli::Y));
                    out = out.add(&lo.mul(&up)?.scale_real(((j + 1) as f64).sqrt()))?;
                }
                out
            }
        })
    }

    /// `b†b`: `(I − Z)/2` for one qubit, `Σ_j j (I − Z_j)/2` for unary.
    pub fn number(self, cutoff: usize) -> Result<PauliSum> {
        let n = self.n_qubits(cutoff)?;
        let mut s = PauliSum::zero(n);
        let levels: Vec<usize> = match self {
            BosonEncoding::SingleQubit => vec![0],
            BosonEncoding::Unary => (1..=cutoff).collect(),
        };
        for j in levels {
            let w = match self {
                BosonEncoding::SingleQubit => 1.0,
                BosonEncoding::Unary => j as f64,
            };
            s.add_term(Complex64::new(0.5 * w, 0.0), &PauliString::identity(n));
            s.add_term(Complex64::new(-0.5 * w, 0.0), &PauliString::single(n, j, Pauli::Z));
        }
        Ok(s)
    }

    /// Z-mask of the photon-number parity `exp(−iπ b†b)` on the register.
    pub fn parity_mask(self, cutoff: usize) -> Result<u64> {
        let n = self.n_qubits(cutoff)?;
        Ok(match self {
            BosonEncoding::SingleQubit => 1,
            BosonEncoding::Unary => (0..n).filter(|j| j % 2 == 1).fold(0, |m, j| m | 1 << j),
        })
    }

    /// Total one-hot occupancy `Σ_j (I − Z_j)/2` (equal to 1 on the valid
    /// unary subspace); `None` for the single-qubit register.
    pub fn occupancy(self, cutoff: usize) -> Result<Option<PauliSum>> {
        let n = self.n_qubits(cutoff)?;
        Ok(match self {
            BosonEncoding::SingleQubit => None,
            BosonEncoding::Unary => {
                let mut s = PauliSum::identity(n, 0.5 * n as f64);
                for j in 0..n {
                    s.add_term(Complex64::new(-0.5, 0.0), &PauliString::single(n, j, Pauli::Z));
                }
                Some(s)
            }
        })
    }

    fn word(self, cutoff: usize, word: &[Ladder]) -> Result<PauliSum> {
        let n = self.n_qubits(cutoff)?;
        if word == [Ladder::Create, Ladder::Annihilate] {
            return self.number(cutoff);
        }
        let create = self.creation(cutoff)?;
        let annihilate = create.adjoint();
        let mut acc = PauliSum::identity(n, 1.0);
        for l in word {
            acc = acc.mul(match l {
                Ladder::Create => &create,
                Ladder::Annihilate => &annihilate,
            })?;
        }
        Ok(acc)
    }
}

/// Tensor every boson word with its fermionic Pauli sum. Fermion qubits come
/// first, the photon register follows; the scalar constant is folded into
/// the identity coefficient. Words longer than the cutoff are truncated by
/// construction of the register.
pub fn encode_bosons(mapped: &FermionMapped, enc: BosonEncoding, cutoff: usize) -> Result<PauliSum> {
    let nf = mapped.n_qubits;
    let nb = enc.n_qubits(cutoff)?;
    let n = nf + nb;
    let mut out = PauliSum::identity(n, mapped.constant);
    for (word, fsum) in &mapped.parts {
        let bsum = enc.word(cutoff, word)?;
        let lifted_b = bsum.map_terms(n, |c, p| vec![(c, p.embed(n, nf))]);
        let lifted_f = fsum.map_terms(n, |c, p| vec![(c, p.embed(n, 0))]);
        out = out.add(&lifted_f.mul(&lifted_b)?)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::to_dense_matrix;

    #[test]
    fn single_qubit_number() {
        let n = BosonEncoding::SingleQubit.number(1).unwrap();
        assert_eq!(n, PauliSum::from_labels([(0.5, "I"), (-0.5, "Z")]).unwrap());
        let m = to_dense_matrix(&n).unwrap();
        assert_eq!(m[(0, 0)].re, 0.0);
        assert_eq!(m[(1, 1)].re, 1.0);
    }

    #[test]
    fn single_qubit_creation_is_raising() {
        let m = to_dense_matrix(&BosonEncoding::SingleQubit.creation(1).unwrap()).unwrap();
        assert_eq!(m[(1, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(m.iter().filter(|c| c.norm() > 0.0).count(), 1);
    }

    #[test]
    fn unary_ladder_on_valid_subspace() {
        let enc = BosonEncoding::Unary;
        let m = to_dense_matrix(&enc.creation(2).unwrap()).unwrap();
        // one-hot states |n⟩ ↦ basis index 1 << n
        let idx = [1usize, 2, 4];
        for (a, &ia) in idx.iter().enumerate() {
            for (b, &ib) in idx.iter().enumerate() {
                let want = if a == b + 1 { (a as f64).sqrt() } else { 0.0 };
                assert!((m[(ia, ib)] - Complex64::new(want, 0.0)).norm() < 1e-14, "<{a}|b†|{b}>");
            }
        }
        let nm = to_dense_matrix(&enc.number(2).unwrap()).unwrap();
        for (k, &i) in idx.iter().enumerate() {
            assert!((nm[(i, i)].re - k as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn single_qubit_rejects_higher_cutoff() {
        assert!(matches!(BosonEncoding::SingleQubit.n_qubits(2), Err(Error::EncodingMismatch(_))));
    }
}

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum};

/// Tolerance on coefficients of terms that break a tapered symmetry.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Simultaneous removal of commuting Z-type symmetries.
///
/// Generators are brought to reduced echelon form with each pivot at the
/// highest qubit of its row, so no other generator touches a pivot. For a
/// generator `τ` with pivot `q`, the Clifford `U = (X_q + τ)/√2` maps `τ` to
/// `X_q`; a symmetric term that anticommutes with `X_q` becomes `X_q τ T`.
/// Afterwards every term holds `I` or `X` on the pivots, `X_q` is replaced
/// by the sector eigenvalue and the pivot qubits are dropped. The
/// reference bits of the surviving qubits are unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct Z2Taper {
    n_qubits: usize,
    generators: Vec<u64>,
    pivots: Vec<usize>,
    sectors: Vec<f64>,
}

impl Z2Taper {
    /// Build from Z masks; the sector of each generator is the one holding
    /// the basis state `reference_bits`. Dependent generators are dropped.
    pub fn new(n_qubits: usize, generators: &[u64], reference_bits: u64) -> Result<Self> {
        let mut rows: Vec<u64> = generators.iter().copied().filter(|&g| g != 0).collect();
        let mut reduced: Vec<(usize, u64)> = Vec::new();
        while let Some(pos) = rows.iter().enumerate().max_by_key(|(_, r)| 63 - r.leading_zeros() as usize).map(|(i, _)| i)
        {
            let r = rows.swap_remove(pos);
            if r == 0 {
                continue;
            }
            let piv = 63 - r.leading_zeros() as usize;
            if piv >= n_qubits {
                return Err(Error::InvalidInput(format!("generator {r:#b} exceeds {n_qubits} qubits")));
            }
            for other in rows.iter_mut() {
                if *other >> piv & 1 == 1 {
                    *other ^= r;
                }
            }
            for (_, prev) in reduced.iter_mut() {
                if *prev >> piv & 1 == 1 {
                    *prev ^= r;
                }
            }
            rows.retain(|&x| x != 0);
            reduced.push((piv, r));
        }
        reduced.sort_by_key(|&(p, _)| std::cmp::Reverse(p));
        let sectors = reduced
            .iter()
            .map(|&(_, g)| if (g & reference_bits).count_ones() % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        Ok(Self {
            n_qubits,
            pivots: reduced.iter().map(|&(p, _)| p).collect(),
            generators: reduced.into_iter().map(|(_, g)| g).collect(),
            sectors,
        })
    }

    pub fn n_qubits_in(&self) -> usize {
        self.n_qubits
    }
    pub fn n_qubits_out(&self) -> usize {
        self.n_qubits - self.pivots.len()
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn generators(&self) -> &[u64] {
        &self.generators
    }
    /// Eigenvalue (±1) selected for each generator.
    pub fn sectors(&self) -> &[f64] {
        &self.sectors
    }

    fn pivot_mask(&self) -> u64 {
        self.pivots.iter().fold(0, |m, &p| m | 1 << p)
    }

    fn generator_string(&self, k: usize) -> PauliString {
        PauliString::from_masks(self.n_qubits, 0, self.generators[k]).expect("generator fits")
    }

    /// Every term commutes with every generator.
    pub fn commutes(&self, op: &PauliSum) -> bool {
        (0..self.generators.len()).all(|k| op.commutes_termwise(&self.generator_string(k)))
    }

    /// Taper `op`. Terms that break a symmetry above [`SYMMETRY_TOL`] abort.
    pub fn apply(&self, op: &PauliSum) -> Result<PauliSum> {
        if op.n_qubits() != self.n_qubits {
            return Err(Error::SizeMismatch(op.n_qubits(), self.n_qubits));
        }
        let gens: Vec<PauliString> = (0..self.generators.len()).map(|k| self.generator_string(k)).collect();
        for (c, t) in op.iter() {
            if c.norm() > SYMMETRY_TOL {
                if let Some(g) = gens.iter().find(|g| !g.commutes_with(&t)) {
                    return Err(Error::SymmetryViolated(format!(
                        "term {} ({c}) anticommutes with {}",
                        t.label(),
                        g.label()
                    )));
                }
            }
        }
        let removed = self.pivot_mask();
        let out_n = self.n_qubits_out();
        Ok(op.map_terms(out_n, |c, t| {
            if !gens.iter().all(|g| g.commutes_with(&t)) {
                return Vec::new();
            }
            let mut t = t;
            let mut c = c;
            for (k, &q) in self.pivots.iter().enumerate() {
                if t.z_mask() >> q & 1 == 1 {
                    let xq = PauliString::single(self.n_qubits, q, Pauli::X);
                    t = xq.mul_unchecked(&gens[k]).mul_unchecked(&t);
                }
                debug_assert_eq!(t.z_mask() >> q & 1, 0);
                if t.x_mask() >> q & 1 == 1 {
                    c *= self.sectors[k];
                }
            }
            vec![(c, t.remove_qubits(removed))]
        }))
    }

    /// Reference bits on the surviving qubits.
    pub fn reduce_bits(&self, bits: u64) -> u64 {
        let removed = self.pivot_mask();
        let mut out = 0;
        let mut k = 0;
        for q in 0..self.n_qubits {
            if removed >> q & 1 == 1 {
                continue;
            }
            out |= (bits >> q & 1) << k;
            k += 1;
        }
        out
    }
}

/// Conjugate by `X` on every qubit set in `reference_bits`, so that
/// `|0…0⟩` plays the role of the reference: each term picks up
/// `(−1)^{#Z + #Y}` counted on the flipped qubits.
pub fn flip_reference_signs(h: &PauliSum, reference_bits: u64) -> PauliSum {
    h.map_terms(h.n_qubits(), |c, p| {
        let odd = (p.z_mask() & reference_bits).count_ones() % 2 == 1;
        vec![(if odd { -c } else { c }, p)]
    })
}

/// Diagonal value `⟨b|D|b⟩` of a Pauli sum on basis state `b`; only
/// Z-type terms contribute.
pub fn diagonal_value(d: &PauliSum, bits: u64) -> Complex64 {
    d.iter()
        .filter(|(_, p)| p.x_mask() == 0)
        .map(|(c, p)| if (p.z_mask() & bits).count_ones() % 2 == 0 { c } else { -c })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{expectation, DenseState};

    #[test]
    fn sign_flip_rules() {
        let zz = PauliSum::from_labels([(1.0, "ZZ")]).unwrap();
        assert_eq!(flip_reference_signs(&zz, 0b11), zz);
        let zi = PauliSum::from_labels([(1.0, "ZI")]).unwrap();
        assert_eq!(flip_reference_signs(&zi, 0b11), zi.scale_real(-1.0));
        let yx = PauliSum::from_labels([(0.3, "YX")]).unwrap();
        assert_eq!(flip_reference_signs(&yx, 0b01), yx.scale_real(-1.0));
    }

    #[test]
    fn flipped_expectation_matches() {
        let h = PauliSum::from_labels([(0.4, "ZI"), (-0.2, "XY"), (0.7, "ZZ"), (0.1, "YY"), (0.3, "IZ")]).unwrap();
        let r = 0b10;
        let a = expectation(&h, &DenseState::basis(2, r)).unwrap();
        let b = expectation(&flip_reference_signs(&h, r), &DenseState::basis(2, 0)).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn single_z_generator_substitutes_eigenvalue() {
        let h = PauliSum::from_labels([(1.0, "ZZI"), (0.5, "XIZ"), (0.25, "IZI")]).unwrap();
        let t = Z2Taper::new(3, &[0b010], 0b010).unwrap();
        assert_eq!(t.pivots(), &[1]);
        assert_eq!(t.sectors(), &[-1.0]);
        let out = t.apply(&h).unwrap();
        assert_eq!(out, PauliSum::from_labels([(-1.0, "ZI"), (0.5, "XZ"), (-0.25, "II")]).unwrap());
    }

    #[test]
    fn echelon_keeps_pivots_private() {
        let t = Z2Taper::new(5, &[0b00010, 0b01000, 0b11101], 0).unwrap();
        assert_eq!(t.pivots(), &[4, 3, 1]);
        for (k, &p) in t.pivots().iter().enumerate() {
            for (j, g) in t.generators().iter().enumerate() {
                assert_eq!(g >> p & 1 == 1, j == k);
            }
        }
    }

    #[test]
    fn rejects_symmetry_breaking_term() {
        let h = PauliSum::from_labels([(1.0, "XX"), (1.0, "XI")]).unwrap();
        let t = Z2Taper::new(2, &[0b11], 0).unwrap();
        assert!(matches!(t.apply(&h), Err(Error::SymmetryViolated(_))));
    }
}

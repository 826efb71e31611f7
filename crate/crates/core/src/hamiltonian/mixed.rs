use num_complex::Complex64;

use crate::error::{Error, Result};

/// Creation or annihilation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub enum Ladder {
    Create,
    Annihilate,
}

impl Ladder {
    pub fn dagger(self) -> Self {
        match self {
            Ladder::Create => Ladder::Annihilate,
            Ladder::Annihilate => Ladder::Create,
        }
    }
}

/// One product `c · (fermion word) · (boson word)`. Fermion and boson
/// operators commute, so the two words are stored separately.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedTerm {
    pub coeff: Complex64,
    /// `(spin-orbital, ladder)` in operator order (leftmost acts last).
    pub fermions: Vec<(usize, Ladder)>,
    pub bosons: Vec<Ladder>,
}

impl MixedTerm {
    pub fn adjoint(&self) -> MixedTerm {
        MixedTerm {
            coeff: self.coeff.conj(),
            fermions: self.fermions.iter().rev().map(|&(p, l)| (p, l.dagger())).collect(),
            bosons: self.bosons.iter().rev().map(|l| l.dagger()).collect(),
        }
    }

    fn same_word(&self, other: &MixedTerm) -> bool {
        self.fermions == other.fermions && self.bosons == other.bosons
    }
}

/// Second-quantized operator over `n_modes` fermionic spin-orbitals and one
/// bosonic mode, plus a scalar constant kept outside the term list.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedOperator {
    n_modes: usize,
    terms: Vec<MixedTerm>,
    constant: f64,
}

impl MixedOperator {
    pub fn new(n_modes: usize) -> Self {
        Self { n_modes, terms: Vec::new(), constant: 0.0 }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }
    pub fn terms(&self) -> &[MixedTerm] {
        &self.terms
    }
    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn add_constant(&mut self, c: f64) {
        self.constant += c;
    }

    /// Append a term; zero coefficients are skipped.
    pub fn push(&mut self, coeff: impl Into<Complex64>, fermions: &[(usize, Ladder)], bosons: &[Ladder]) -> Result<()> {
        let coeff = coeff.into();
        if let Some(&(p, _)) = fermions.iter().find(|(p, _)| *p >= self.n_modes) {
            return Err(Error::IndexOutOfRange { index: p, len: self.n_modes });
        }
        if coeff == Complex64::new(0.0, 0.0) {
            return Ok(());
        }
        self.terms.push(MixedTerm { coeff, fermions: fermions.to_vec(), bosons: bosons.to_vec() });
        Ok(())
    }

    pub fn extend(&mut self, other: &MixedOperator) -> Result<()> {
        if other.n_modes != self.n_modes {
            return Err(Error::SizeMismatch(self.n_modes, other.n_modes));
        }
        self.terms.extend(other.terms.iter().cloned());
        self.constant += other.constant;
        Ok(())
    }

    pub fn scale(&self, s: Complex64) -> MixedOperator {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff *= s;
        }
        out.constant = (Complex64::new(out.constant, 0.0) * s).re;
        out
    }

    pub fn adjoint(&self) -> MixedOperator {
        MixedOperator {
            n_modes: self.n_modes,
            terms: self.terms.iter().map(MixedTerm::adjoint).collect(),
            constant: self.constant,
        }
    }

    /// `self − self†`.
    pub fn anti_hermitian_part(&self) -> MixedOperator {
        let mut out = self.clone();
        out.constant = 0.0;
        for t in &self.terms {
            let mut a = t.adjoint();
            a.coeff = -a.coeff;
            out.terms.push(a);
        }
        out
    }

    /// Structural Hermiticity check: the conjugate of every word's summed
    /// coefficient matches the summed coefficient of its adjoint word.
    /// Words are compared literally, without normal ordering.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let total = |w: &MixedTerm| -> Complex64 {
            self.terms.iter().filter(|t| t.same_word(w)).map(|t| t.coeff).sum()
        };
        self.terms.iter().all(|t| {
            let adj = t.adjoint();
            (total(t).conj() - total(&adj)).norm() <= tol
        })
    }

    /// Largest bosonic word length.
    pub fn max_boson_order(&self) -> usize {
        self.terms.iter().map(|t| t.bosons.len()).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Ladder::*;

    #[test]
    fn adjoint_reverses_words() {
        let t = MixedTerm {
            coeff: Complex64::new(1.0, 2.0),
            fermions: vec![(1, Create), (0, Annihilate)],
            bosons: vec![Create],
        };
        let a = t.adjoint();
        assert_eq!(a.coeff, Complex64::new(1.0, -2.0));
        assert_eq!(a.fermions, vec![(0, Create), (1, Annihilate)]);
        assert_eq!(a.bosons, vec![Annihilate]);
    }

    #[test]
    fn hermiticity() {
        let mut op = MixedOperator::new(2);
        op.push(0.5, &[(1, Create), (0, Annihilate)], &[]).unwrap();
        assert!(!op.is_hermitian(1e-12));
        op.push(0.5, &[(0, Create), (1, Annihilate)], &[]).unwrap();
        assert!(op.is_hermitian(1e-12));
    }

    #[test]
    fn index_guard() {
        let mut op = MixedOperator::new(2);
        assert!(matches!(op.push(1.0, &[(2, Create)], &[]), Err(Error::IndexOutOfRange { index: 2, len: 2 })));
    }
}

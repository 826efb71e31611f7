use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use super::string::{i_pow, PauliString};
use crate::error::{Error, Result};

pub const DEFAULT_DROP_TOL: f64 = 1e-12;

/// Weighted sum of Hermitian Pauli letter strings.
///
/// Keys are phase-free `(x_mask, z_mask)` pairs; the unit phase of an
/// incoming [`PauliString`] is folded into its coefficient. Keys are kept
/// sorted so iteration order (and every derived float) is reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: BTreeMap<(u64, u64), Complex64>,
    drop_tol: f64,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        Self { n_qubits, terms: BTreeMap::new(), drop_tol: DEFAULT_DROP_TOL }
    }

    pub fn identity(n_qubits: usize, c: f64) -> Self {
        let mut s = Self::zero(n_qubits);
        s.add_term(Complex64::new(c, 0.0), &PauliString::identity(n_qubits));
        s
    }

    pub fn from_string(c: Complex64, p: &PauliString) -> Self {
        let mut s = Self::zero(p.n_qubits());
        s.add_term(c, p);
        s
    }

    /// Build from `(coefficient, label)` pairs.
    pub fn from_labels<'a, I>(items: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, &'a str)>,
    {
        let mut out: Option<PauliSum> = None;
        for (c, l) in items {
            let p = PauliString::from_label(l)?;
            let s = out.get_or_insert_with(|| PauliSum::zero(p.n_qubits()));
            if s.n_qubits != p.n_qubits() {
                return Err(Error::SizeMismatch(s.n_qubits, p.n_qubits()));
            }
            s.add_term(Complex64::new(c, 0.0), &p);
        }
        out.ok_or_else(|| Error::InvalidInput("empty term list".into()))
    }

    pub fn with_drop_tol(mut self, tol: f64) -> Self {
        self.drop_tol = tol;
        self.prune();
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }
    pub fn drop_tol(&self) -> f64 {
        self.drop_tol
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Accumulate `c · p`, folding `p`'s phase into the coefficient.
    pub fn add_term(&mut self, c: Complex64, p: &PauliString) {
        assert_eq!(p.n_qubits(), self.n_qubits, "term size mismatch");
        let c = c * i_pow(p.phase());
        let key = (p.x_mask(), p.z_mask());
        let e = self.terms.entry(key).or_insert(Complex64::new(0.0, 0.0));
        *e += c;
        if e.norm() < self.drop_tol {
            self.terms.remove(&key);
        }
    }

    fn prune(&mut self) {
        let tol = self.drop_tol;
        self.terms.retain(|_, c| c.norm() >= tol);
    }

    /// Iterate `(coefficient, phase-free string)` in key order.
    pub fn iter(&self) -> impl Iterator<Item = (Complex64, PauliString)> + '_ {
        let n = self.n_qubits;
        self.terms
            .iter()
            .map(move |(&(x, z), &c)| (c, PauliString::from_masks(n, x, z).expect("stored mask")))
    }

    pub fn coefficient(&self, p: &PauliString) -> Complex64 {
        self.terms
            .get(&(p.x_mask(), p.z_mask()))
            .copied()
            .unwrap_or_default()
            * i_pow(p.phase()).conj()
    }

    pub fn identity_coefficient(&self) -> Complex64 {
        self.terms.get(&(0, 0)).copied().unwrap_or_default()
    }

    pub fn without_identity(&self) -> PauliSum {
        let mut s = self.clone();
        s.terms.remove(&(0, 0));
        s
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch(self.n_qubits, other.n_qubits));
        }
        let mut out = self.clone();
        for (&k, &c) in &other.terms {
            let e = out.terms.entry(k).or_insert(Complex64::new(0.0, 0.0));
            *e += c;
        }
        out.prune();
        Ok(out)
    }

    pub fn sub(&self, other: &PauliSum) -> Result<PauliSum> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> PauliSum {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= s;
        }
        out.prune();
        out
    }

    pub fn scale_real(&self, s: f64) -> PauliSum {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn mul(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch(self.n_qubits, other.n_qubits));
        }
        let mut out = PauliSum::zero(self.n_qubits);
        out.drop_tol = self.drop_tol;
        let mut acc: BTreeMap<(u64, u64), Complex64> = BTreeMap::new();
        for (ca, pa) in self.iter() {
            for (cb, pb) in other.iter() {
                let r = pa.mul_unchecked(&pb);
                *acc.entry((r.x_mask(), r.z_mask())).or_default() += ca * cb * i_pow(r.phase());
            }
        }
        out.terms = acc;
        out.prune();
        Ok(out)
    }

    pub fn adjoint(&self) -> PauliSum {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.conj();
        }
        out
    }

    /// Largest |Im c| over all terms.
    pub fn max_imag(&self) -> f64 {
        self.terms.values().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn max_real(&self) -> f64 {
        self.terms.values().map(|c| c.re.abs()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        self.max_real() <= tol
    }

    /// Drop imaginary parts; caller is responsible for having checked them.
    pub fn real_part(&self) -> PauliSum {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            c.im = 0.0;
        }
        out.prune();
        out
    }

    /// True when every term commutes with `p`.
    pub fn commutes_termwise(&self, p: &PauliString) -> bool {
        self.iter().all(|(_, t)| t.commutes_with(p))
    }

    /// `[self, other]` as a Pauli sum.
    pub fn commutator(&self, other: &PauliSum) -> Result<PauliSum> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn one_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// Apply a per-term transformation producing a new sum on `n_out` qubits.
    pub fn map_terms<F>(&self, n_out: usize, mut f: F) -> PauliSum
    where
        F: FnMut(Complex64, PauliString) -> Vec<(Complex64, PauliString)>,
    {
        let mut out = PauliSum::zero(n_out);
        out.drop_tol = self.drop_tol;
        for (c, p) in self.iter() {
            for (c2, p2) in f(c, p) {
                let e = out
                    .terms
                    .entry((p2.x_mask(), p2.z_mask()))
                    .or_insert(Complex64::new(0.0, 0.0));
                *e += c2 * i_pow(p2.phase());
            }
        }
        out.prune();
        out
    }

    /// One term per line: `coeff_real coeff_imag LABEL`, qubit 0 leftmost.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (c, p) in self.iter() {
            let _ = writeln!(s, "{:?} {:?} {}", c.re, c.im, p.label());
        }
        s
    }

    /// Inverse of [`PauliSum::to_text`]. An empty document needs `n_qubits`.
    pub fn from_text(text: &str, n_qubits: Option<usize>) -> Result<PauliSum> {
        let mut out: Option<PauliSum> = n_qubits.map(PauliSum::zero);
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: i + 1, msg };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(perr(format!("expected 3 fields, found {}", fields.len())));
            }
            let re: f64 = fields[0].parse().map_err(|e| perr(format!("real part: {e}")))?;
            let im: f64 = fields[1].parse().map_err(|e| perr(format!("imaginary part: {e}")))?;
            let p = PauliString::from_label(fields[2]).map_err(|e| perr(e.to_string()))?;
            let s = out.get_or_insert_with(|| PauliSum::zero(p.n_qubits()));
            if s.n_qubits != p.n_qubits() {
                return Err(perr(format!(
                    "label has {} qubits, expected {}",
                    p.n_qubits(),
                    s.n_qubits
                )));
            }
            // exact: terms are stored verbatim
            *s.terms.entry((p.x_mask(), p.z_mask())).or_default() += Complex64::new(re, im);
        }
        out.ok_or_else(|| Error::Parse { line: 0, msg: "empty document".into() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn cancellation() {
        let a = PauliSum::from_labels([(1.0, "X")]).unwrap();
        let b = PauliSum::from_labels([(-1.0, "X")]).unwrap();
        assert!(a.add(&b).unwrap().is_empty());
    }

    #[test]
    fn disjoint_merge() {
        let a = PauliSum::from_labels([(0.5, "Z")]).unwrap();
        let b = PauliSum::from_labels([(0.5, "I")]).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.identity_coefficient(), c(0.5));
        assert_eq!(s.coefficient(&PauliString::from_label("Z").unwrap()), c(0.5));
    }

    #[test]
    fn add_size_mismatch() {
        let a = PauliSum::from_labels([(1.0, "XX")]).unwrap();
        let b = PauliSum::from_labels([(1.0, "X")]).unwrap();
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn phase_folds_into_coefficient() {
        let p = PauliString::from_label("Y").unwrap().with_phase(1);
        let s = PauliSum::from_string(c(2.0), &p);
        assert_eq!(s.iter().next().unwrap().0, Complex64::new(0.0, 2.0));
        assert_eq!(s.iter().next().unwrap().1.phase(), 0);
    }

    #[test]
    fn ladder_product() {
        // (X - iY)/2 · (X + iY)/2 = (I - Z)/2
        let raise = PauliSum::from_labels([(0.5, "X")])
            .unwrap()
            .add(&PauliSum::from_string(Complex64::new(0.0, -0.5), &PauliString::from_label("Y").unwrap()))
            .unwrap();
        let n = raise.mul(&raise.adjoint()).unwrap();
        let expect = PauliSum::from_labels([(0.5, "I"), (-0.5, "Z")]).unwrap();
        assert!(n.sub(&expect).unwrap().is_empty());
    }

    #[test]
    fn text_round_trip() {
        let mut s = PauliSum::from_labels([(0.1, "XYZ"), (-1.0 / 3.0, "IIZ"), (1e-9, "ZZZ")]).unwrap();
        s.add_term(Complex64::new(0.0, 0.7), &PauliString::from_label("YYI").unwrap());
        let t = s.to_text();
        let back = PauliSum::from_text(&t, None).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_text(), t);
    }

    #[test]
    fn text_errors_carry_line_numbers() {
        let err = PauliSum::from_text("1 0 XX\n1 0 XQ\n", None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = PauliSum::from_text("1 0 XX\n1 0 X\n", None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::string::{i_pow, PauliString};
use super::sum::PauliSum;
use crate::error::{Error, Result};

/// Largest register handled with dense 2^n × 2^n matrices.
pub const DENSE_LIMIT: usize = 12;

/// Tolerance on the imaginary residue of an expectation value.
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;

/// Dense quantum state. Basis index bit `q` holds qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub enum DenseState {
    Statevector { n_qubits: usize, amps: Vec<Complex64> },
    /// Row-major `dim × dim` density matrix.
    Density { n_qubits: usize, rho: Vec<Complex64> },
}

impl DenseState {
    pub fn basis(n_qubits: usize, index: u64) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[index as usize] = Complex64::new(1.0, 0.0);
        DenseState::Statevector { n_qubits, amps }
    }

    /// Basis state from per-qubit bits (`bits[q]` for qubit `q`).
    pub fn from_bits(bits: &[bool]) -> Self {
        let idx = bits.iter().enumerate().fold(0u64, |a, (q, &b)| a | ((b as u64) << q));
        Self::basis(bits.len(), idx)
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            DenseState::Statevector { n_qubits, .. } | DenseState::Density { n_qubits, .. } => {
                *n_qubits
            }
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits()
    }

    /// Convert to a density matrix (`|ψ><ψ|` for pure states).
    pub fn to_density(&self) -> DenseState {
        match self {
            DenseState::Density { .. } => self.clone(),
            DenseState::Statevector { n_qubits, amps } => {
                let d = amps.len();
                let mut rho = vec![Complex64::new(0.0, 0.0); d * d];
                for i in 0..d {
                    for j in 0..d {
                        rho[i * d + j] = amps[i] * amps[j].conj();
                    }
                }
                DenseState::Density { n_qubits: *n_qubits, rho }
            }
        }
    }

    pub fn trace(&self) -> Complex64 {
        match self {
            DenseState::Statevector { amps, .. } => {
                Complex64::new(amps.iter().map(|a| a.norm_sqr()).sum(), 0.0)
            }
            DenseState::Density { rho, .. } => {
                let d = self.dim();
                (0..d).map(|i| rho[i * d + i]).sum()
            }
        }
    }

    /// Computational-basis probabilities.
    pub fn probabilities(&self) -> Vec<f64> {
        match self {
            DenseState::Statevector { amps, .. } => amps.iter().map(|a| a.norm_sqr()).collect(),
            DenseState::Density { rho, .. } => {
                let d = self.dim();
                (0..d).map(|i| rho[i * d + i].re).collect()
            }
        }
    }

    /// Check the representation invariants at tolerance `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidInput(format!("state trace {tr} differs from 1")));
        }
        if let DenseState::Density { rho, .. } = self {
            let d = self.dim();
            let m = DMatrix::from_row_slice(d, d, rho);
            let herm = (&m - m.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max);
            if herm > tol {
                return Err(Error::InvalidInput(format!("density matrix not Hermitian ({herm:.3e})")));
            }
            let ev = m.symmetric_eigenvalues();
            let min = ev.iter().cloned().fold(f64::INFINITY, f64::min);
            if min < -1e-9 {
                return Err(Error::InvalidInput(format!("density matrix not PSD (min eig {min:.3e})")));
            }
        }
        Ok(())
    }

    /// `<P>` for a single string (complex in general).
    pub fn pauli_expectation(&self, p: &PauliString) -> Complex64 {
        match self {
            DenseState::Statevector { amps, .. } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (b, a) in amps.iter().enumerate() {
                    if a.norm_sqr() == 0.0 {
                        continue;
                    }
                    let (k, b2) = p.apply_to_basis(b as u64);
                    acc += amps[b2 as usize].conj() * i_pow(k) * a;
                }
                acc
            }
            DenseState::Density { rho, .. } => {
                let d = self.dim();
                let mut acc = Complex64::new(0.0, 0.0);
                // Tr(ρP) = Σ_b <b|ρ P|b> = Σ_b i^k ρ[b', b] with P|b> = i^k|b'>
                for b in 0..d {
                    let (k, b2) = p.apply_to_basis(b as u64);
                    acc += rho[b * d + b2 as usize] * i_pow(k);
                }
                acc
            }
        }
    }
}

/// Σ_k c_k <P_k> for a Hermitian observable.
pub fn expectation(obs: &PauliSum, state: &DenseState) -> Result<f64> {
    if obs.n_qubits() != state.n_qubits() {
        return Err(Error::DimensionMismatch { expected: obs.n_qubits(), found: state.n_qubits() });
    }
    if !obs.is_hermitian(IMAG_RESIDUE_TOL) {
        return Err(Error::NonHermitian(obs.max_imag()));
    }
    let v = expectation_complex(obs, state);
    debug_assert!(v.im.abs() < 1e-8, "imaginary residue {}", v.im);
    Ok(v.re)
}

pub(crate) fn expectation_complex(obs: &PauliSum, state: &DenseState) -> Complex64 {
    obs.iter().map(|(c, p)| c * state.pauli_expectation(&p)).sum()
}

/// Exact 2^n × 2^n matrix. Row/column index bit `q` is qubit `q`.
pub fn to_dense_matrix(obs: &PauliSum) -> Result<DMatrix<Complex64>> {
    let n = obs.n_qubits();
    if n > DENSE_LIMIT {
        return Err(Error::TooManyQubits { n, limit: DENSE_LIMIT });
    }
    let d = 1usize << n;
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for (c, p) in obs.iter() {
        for b in 0..d {
            let (k, b2) = p.apply_to_basis(b as u64);
            m[(b2 as usize, b)] += c * i_pow(k);
        }
    }
    Ok(m)
}

/// Apply a Pauli sum to a statevector.
pub fn apply_sum(obs: &PauliSum, amps: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
    for (c, p) in obs.iter() {
        for (b, a) in amps.iter().enumerate() {
            let (k, b2) = p.apply_to_basis(b as u64);
            out[b2 as usize] += c * i_pow(k) * a;
        }
    }
    out
}

use num_complex::Complex64;

use super::noise::NoiseModel;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::DenseState;

/// Largest register the density-matrix simulator accepts.
pub const SIM_LIMIT: usize = 10;

/// Row-major density matrix on `n` qubits.
#[derive(Debug, Clone)]
pub(crate) struct Rho {
    pub n: usize,
    pub d: usize,
    pub m: Vec<Complex64>,
}

impl Rho {
    pub fn zero_state(n: usize) -> Self {
        let d = 1 << n;
        let mut m = vec![Complex64::new(0.0, 0.0); d * d];
        m[0] = Complex64::new(1.0, 0.0);
        Self { n, d, m }
    }

    pub fn from_state(s: &DenseState) -> Self {
        match s.to_density() {
            DenseState::Density { n_qubits, rho } => Self { n: n_qubits, d: 1 << n_qubits, m: rho },
            DenseState::Statevector { .. } => unreachable!("to_density returns a density matrix"),
        }
    }

    pub fn into_state(self) -> DenseState {
        DenseState::Density { n_qubits: self.n, rho: self.m }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.d).map(|i| self.m[i * self.d + i].re).collect()
    }

    /// `ρ → U ρ U†` for a single-qubit `U` on `q`.
    pub fn apply_1q(&mut self, q: usize, u: &[[Complex64; 2]; 2]) {
        let (d, bit) = (self.d, 1 << q);
        for col in 0..d {
            for r0 in (0..d).filter(|r| r & bit == 0) {
                let r1 = r0 | bit;
                let (a, b) = (self.m[r0 * d + col], self.m[r1 * d + col]);
                self.m[r0 * d + col] = u[0][0] * a + u[0][1] * b;
                self.m[r1 * d + col] = u[1][0] * a + u[1][1] * b;
            }
        }
        for row in 0..d {
            for c0 in (0..d).filter(|c| c & bit == 0) {
                let c1 = c0 | bit;
                let (a, b) = (self.m[row * d + c0], self.m[row * d + c1]);
                self.m[row * d + c0] = a * u[0][0].conj() + b * u[0][1].conj();
                self.m[row * d + c1] = a * u[1][0].conj() + b * u[1][1].conj();
            }
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        let d = self.d;
        let perm = |i: usize| if i >> control & 1 == 1 { i ^ 1 << target } else { i };
        let old = self.m.clone();
        for i in 0..d {
            let pi = perm(i);
            for j in 0..d {
                self.m[pi * d + perm(j)] = old[i * d + j];
            }
        }
    }

    /// `(1−p)ρ + p · I/2^k ⊗ Tr_S ρ` over the qubits in `mask` (k = |S|).
    pub fn depolarize(&mut self, mask: usize, p: f64) {
        if p == 0.0 {
            return;
        }
        let d = self.d;
        let k = mask.count_ones();
        let w = 1.0 / (1u64 << k) as f64;
        let subs: Vec<usize> = (0..d).filter(|s| s & !mask == 0).collect();
        let old = self.m.clone();
        for i in 0..d {
            for j in 0..d {
                let idx = i * d + j;
                let mixed = if (i ^ j) & mask == 0 {
                    let (bi, bj) = (i & !mask, j & !mask);
                    subs.iter().map(|&s| old[(bi | s) * d + (bj | s)]).sum::<Complex64>() * w
                } else {
                    Complex64::new(0.0, 0.0)
                };
                self.m[idx] = old[idx] * (1.0 - p) + mixed * p;
            }
        }
    }

    /// Amplitude damping with decay probability `gamma` on qubit `q`.
    pub fn amplitude_damp(&mut self, q: usize, gamma: f64) {
        if gamma == 0.0 {
            return;
        }
        let (d, bit) = (self.d, 1 << q);
        let s = (1.0 - gamma).sqrt();
        for i in (0..d).filter(|i| i & bit == 0) {
            for j in (0..d).filter(|j| j & bit == 0) {
                let (i1, j1) = (i | bit, j | bit);
                let p11 = self.m[i1 * d + j1];
                self.m[i * d + j] += p11 * gamma;
                self.m[i1 * d + j1] = p11 * (1.0 - gamma);
                self.m[i * d + j1] *= s;
                self.m[i1 * d + j] *= s;
            }
        }
    }

    pub fn apply_gate(&mut self, g: &Gate, params: &[f64], noise: &NoiseModel) {
        match *g {
            Gate::Cnot { control, target } => {
                self.apply_cnot(control, target);
                self.depolarize(1 << control | 1 << target, noise.p2);
            }
            _ => {
                let q = g.qubits()[0];
                self.apply_1q(q, &g.matrix_1q(params));
                self.depolarize(1 << q, noise.p1);
                self.amplitude_damp(q, noise.gamma_ad);
            }
        }
    }
}

/// Run `circuit` at `params` from `|0…0⟩` under `noise`; each gate is
/// followed by its noise channel.
pub fn evolve(circuit: &Circuit, params: &[f64], noise: &NoiseModel) -> Result<DenseState> {
    Ok(evolve_rho(circuit, params, noise)?.into_state())
}

pub(crate) fn evolve_rho(circuit: &Circuit, params: &[f64], noise: &NoiseModel) -> Result<Rho> {
    let n = circuit.n_qubits();
    if n > SIM_LIMIT {
        return Err(Error::TooManyQubits { n, limit: SIM_LIMIT });
    }
    if params.len() != circuit.n_params() {
        return Err(Error::DimensionMismatch { expected: circuit.n_params(), found: params.len() });
    }
    noise.validate()?;
    let mut rho = Rho::zero_state(n);
    for g in circuit.gates() {
        rho.apply_gate(g, params, noise);
    }
    Ok(rho)
}

use std::fmt::Write as _;

use num_complex::Complex64;

use super::gate::{Angle, Gate};
use crate::error::{Error, Result};

/// Ordered gate list on `n_qubits`, starting from `|0…0⟩`, with named
/// parameter slots.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    params: Vec<String>,
}

/// Gate and parameter counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Resources {
    pub qubits: usize,
    pub cnots: usize,
    pub params: usize,
    pub single_qubit_gates: usize,
}

impl Circuit {
    pub fn new(n_qubits: usize, params: Vec<String>) -> Self {
        Self { n_qubits, gates: Vec::new(), params }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }
    pub fn params(&self) -> &[String] {
        &self.params
    }
    pub fn n_params(&self) -> usize {
        self.params.len()
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        let qs = g.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= self.n_qubits) {
            return Err(Error::IndexOutOfRange { index: q, len: self.n_qubits });
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::InvalidInput(format!("CNOT control and target coincide on qubit {}", qs[0])));
        }
        if let Gate::Rz(_, Angle::Param { slot, .. }) = g {
            if slot >= self.params.len() {
                return Err(Error::IndexOutOfRange { index: slot, len: self.params.len() });
            }
        }
        self.gates.push(g);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Replace every parameter reference by its numeric value.
    pub fn bind(&self, params: &[f64]) -> Result<Circuit> {
        if params.len() != self.params.len() {
            return Err(Error::DimensionMismatch { expected: self.params.len(), found: params.len() });
        }
        let gates = self
            .gates
            .iter()
            .map(|g| match *g {
                Gate::Rz(q, a) => Gate::Rz(q, Angle::Literal(a.value(params))),
                g => g,
            })
            .collect();
        Ok(Circuit { n_qubits: self.n_qubits, gates, params: Vec::new() })
    }

    /// Replace every CNOT by `m` copies (`m` odd); the unitary is unchanged.
    pub fn fold_cnots(&self, m: i64) -> Result<Circuit> {
        if m < 1 || m % 2 == 0 {
            return Err(Error::InvalidNoiseFactor(m));
        }
        let mut out = Circuit::new(self.n_qubits, self.params.clone());
        for g in &self.gates {
            let reps = if g.is_two_qubit() { m as usize } else { 1 };
            out.gates.extend(std::iter::repeat_n(*g, reps));
        }
        Ok(out)
    }

    pub fn resources(&self) -> Resources {
        let cnots = self.gates.iter().filter(|g| g.is_two_qubit()).count();
        Resources {
            qubits: self.n_qubits,
            cnots,
            params: self.params.len(),
            single_qubit_gates: self.gates.len() - cnots,
        }
    }

    /// One gate per line, `KIND q[,q] [param]`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for g in &self.gates {
            let _ = writeln!(s, "{g}");
        }
        s
    }

    /// Noiseless statevector from `|0…0⟩`.
    pub fn statevector(&self, params: &[f64]) -> Result<Vec<Complex64>> {
        if params.len() != self.params.len() {
            return Err(Error::DimensionMismatch { expected: self.params.len(), found: params.len() });
        }
        let mut psi = vec![Complex64::new(0.0, 0.0); 1 << self.n_qubits];
        psi[0] = Complex64::new(1.0, 0.0);
        for g in &self.gates {
            apply_to_statevector(g, params, &mut psi);
        }
        Ok(psi)
    }
}

pub(crate) fn apply_to_statevector(g: &Gate, params: &[f64], psi: &mut [Complex64]) {
    match *g {
        Gate::Cnot { control, target } => {
            for b in 0..psi.len() {
                if b >> control & 1 == 1 && b >> target & 1 == 0 {
                    psi.swap(b, b | 1 << target);
                }
            }
        }
        _ => {
            let q = g.qubits()[0];
            let m = g.matrix_1q(params);
            for b in 0..psi.len() {
                if b >> q & 1 == 0 {
                    let b1 = b | 1 << q;
                    let (a0, a1) = (psi[b], psi[b1]);
                    psi[b] = m[0][0] * a0 + m[0][1] * a1;
                    psi[b1] = m[1][0] * a0 + m[1][1] * a1;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell() -> Circuit {
        let mut c = Circuit::new(2, vec!["t".into()]);
        c.extend([
            Gate::H(0),
            Gate::Cnot { control: 0, target: 1 },
            Gate::Rz(1, Angle::Param { slot: 0, scale: 2.0 }),
            Gate::Cnot { control: 0, target: 1 },
        ])
        .unwrap();
        c
    }

    #[test]
    fn rejects_bad_gates() {
        let mut c = Circuit::new(2, vec![]);
        assert!(c.push(Gate::H(2)).is_err());
        assert!(c.push(Gate::Cnot { control: 1, target: 1 }).is_err());
        assert!(c.push(Gate::Rz(0, Angle::Param { slot: 0, scale: 1.0 })).is_err());
    }

    #[test]
    fn folding() {
        let c = bell();
        assert_eq!(c.fold_cnots(1).unwrap(), c);
        let f = c.fold_cnots(3).unwrap();
        assert_eq!(f.resources().cnots, 6);
        let a = c.statevector(&[0.4]).unwrap();
        let b = f.statevector(&[0.4]).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-12);
        }
        assert!(matches!(c.fold_cnots(2), Err(Error::InvalidNoiseFactor(2))));
        assert!(matches!(c.fold_cnots(-1), Err(Error::InvalidNoiseFactor(-1))));
    }

    #[test]
    fn dump_format() {
        assert_eq!(bell().dump(), "H 0\nCNOT 0,1\nRZ 1 2.0*theta0\nCNOT 0,1\n");
        assert_eq!(bell().bind(&[0.25]).unwrap().dump(), "H 0\nCNOT 0,1\nRZ 1 0.5\nCNOT 0,1\n");
    }

    #[test]
    fn resources() {
        let r = bell().resources();
        assert_eq!((r.qubits, r.cnots, r.params, r.single_qubit_gates), (2, 2, 1, 2));
    }
}

use std::fmt;

use num_complex::Complex64;

use crate::pauli::{Pauli, PauliString};

/// Rotation angle: a literal or `scale · θ[slot]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    Literal(f64),
    Param { slot: usize, scale: f64 },
}

impl Angle {
    pub fn value(&self, params: &[f64]) -> f64 {
        match *self {
            Angle::Literal(a) => a,
            Angle::Param { slot, scale } => scale * params[slot],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    X(usize),
    H(usize),
    S(usize),
    Sdg(usize),
    /// `exp(−i θ Z / 2)`.
    Rz(usize, Angle),
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::X(q) | Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::Rz(q, _) => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Gate::X(_) => "X",
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::Sdg(_) => "SDG",
            Gate::Rz(..) => "RZ",
            Gate::Cnot { .. } => "CNOT",
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }

    /// Inverse gate (Clifford gates only; rotations negate their angle).
    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            Gate::Rz(q, Angle::Literal(a)) => Gate::Rz(q, Angle::Literal(-a)),
            Gate::Rz(q, Angle::Param { slot, scale }) => Gate::Rz(q, Angle::Param { slot, scale: -scale }),
            g => g,
        }
    }

    /// `g† P g` for Clifford gates; `None` for rotations.
    pub fn conjugate(&self, p: &PauliString) -> Option<PauliString> {
        let n = p.n_qubits();
        let single = |q: usize, l: Pauli, neg: bool| {
            PauliString::single(n, q, l).with_phase(if neg { 2 } else { 0 })
        };
        // images of X_q and Z_q
        let image = |q: usize, is_x: bool| -> Option<PauliString> {
            let touched = self.qubits().contains(&q);
            if !touched {
                return Some(single(q, if is_x { Pauli::X } else { Pauli::Z }, false));
            }
            Some(match (*self, is_x) {
                (Gate::H(_), true) => single(q, Pauli::Z, false),
                (Gate::H(_), false) => single(q, Pauli::X, false),
                (Gate::S(_), true) => single(q, Pauli::Y, true),
                (Gate::Sdg(_), true) => single(q, Pauli::Y, false),
                (Gate::S(_) | Gate::Sdg(_), false) => single(q, Pauli::Z, false),
                (Gate::X(_), true) => single(q, Pauli::X, false),
                (Gate::X(_), false) => single(q, Pauli::Z, true),
                (Gate::Cnot { control, target }, true) if q == control => {
                    single(control, Pauli::X, false).mul_unchecked(&single(target, Pauli::X, false))
                }
                (Gate::Cnot { control, target }, false) if q == target => {
                    single(control, Pauli::Z, false).mul_unchecked(&single(target, Pauli::Z, false))
                }
                (Gate::Cnot { .. }, true) => single(q, Pauli::X, false),
                (Gate::Cnot { .. }, false) => single(q, Pauli::Z, false),
                (Gate::Rz(..), _) => return None,
            })
        };
        // P = i^{|x∧z|+phase} X^x Z^z
        let k = ((p.x_mask() & p.z_mask()).count_ones() + p.phase() as u32) % 4;
        let mut out = PauliString::identity(n).with_phase(k as u8);
        for q in 0..n {
            if p.x_mask() >> q & 1 == 1 {
                out = out.mul_unchecked(&image(q, true)?);
            }
        }
        for q in 0..n {
            if p.z_mask() >> q & 1 == 1 {
                out = out.mul_unchecked(&image(q, false)?);
            }
        }
        Some(out)
    }

    /// 2×2 matrix of a single-qubit gate at bound parameters.
    pub(crate) fn matrix_1q(&self, params: &[f64]) -> [[Complex64; 2]; 2] {
        let z = Complex64::new(0.0, 0.0);
        let o = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match *self {
            Gate::X(_) => [[z, o], [o, z]],
            Gate::H(_) => [[h, h], [h, -h]],
            Gate::S(_) => [[o, z], [z, i]],
            Gate::Sdg(_) => [[o, z], [z, -i]],
            Gate::Rz(_, a) => {
                let t = a.value(params) / 2.0;
                [[Complex64::from_polar(1.0, -t), z], [z, Complex64::from_polar(1.0, t)]]
            }
            Gate::Cnot { .. } => panic!("CNOT is not a single-qubit gate"),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Cnot { control, target } => write!(f, "CNOT {control},{target}"),
            Gate::Rz(q, Angle::Literal(a)) => write!(f, "RZ {q} {a:?}"),
            Gate::Rz(q, Angle::Param { slot, scale }) => write!(f, "RZ {q} {scale:?}*theta{slot}"),
            g => write!(f, "{} {}", g.kind(), g.qubits()[0]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(l: &str) -> PauliString {
        PauliString::from_label(l).unwrap()
    }

    #[test]
    fn clifford_images() {
        assert_eq!(Gate::H(0).conjugate(&p("X")).unwrap(), p("Z"));
        assert_eq!(Gate::H(0).conjugate(&p("Y")).unwrap(), p("Y").with_phase(2));
        assert_eq!(Gate::S(0).conjugate(&p("Y")).unwrap(), p("X"));
        assert_eq!(Gate::Sdg(0).conjugate(&p("X")).unwrap(), p("Y"));
        assert_eq!(Gate::X(0).conjugate(&p("Y")).unwrap(), p("Y").with_phase(2));
        let cx = Gate::Cnot { control: 0, target: 1 };
        assert_eq!(cx.conjugate(&p("XI")).unwrap(), p("XX"));
        assert_eq!(cx.conjugate(&p("IZ")).unwrap(), p("ZZ"));
        assert_eq!(cx.conjugate(&p("YI")).unwrap(), p("YX"));
        assert!(Gate::Rz(0, Angle::Literal(0.1)).conjugate(&p("X")).is_none());
    }
}

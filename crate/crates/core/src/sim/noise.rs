use crate::error::{Error, Result};

/// Readout confusion for one qubit: `m[true][reported]`.
pub type ConfusionMatrix = [[f64; 2]; 2];

pub const IDEAL_READOUT: ConfusionMatrix = [[1.0, 0.0], [0.0, 1.0]];

/// Symmetric bit-flip readout error.
pub fn symmetric_flip(p: f64) -> ConfusionMatrix {
    [[1.0 - p, p], [p, 1.0 - p]]
}

/// Gate-local Markovian noise: two-qubit depolarizing after every CNOT,
/// single-qubit depolarizing followed by amplitude damping after every
/// single-qubit gate, and per-qubit readout confusion.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NoiseModel {
    pub p2: f64,
    pub p1: f64,
    pub gamma_ad: f64,
    /// Empty: ideal readout; one entry: shared by all qubits; otherwise one
    /// entry per qubit.
    pub readout: Vec<ConfusionMatrix>,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self { p2: 0.01, p1: 0.0005, gamma_ad: 0.0005, readout: vec![symmetric_flip(0.01)] }
    }
}

impl NoiseModel {
    pub fn ideal() -> Self {
        Self { p2: 0.0, p1: 0.0, gamma_ad: 0.0, readout: Vec::new() }
    }

    pub fn depolarizing_only(p2: f64) -> Self {
        Self { p2, ..Self::ideal() }
    }

    pub fn with_readout(mut self, readout: Vec<ConfusionMatrix>) -> Self {
        self.readout = readout;
        self
    }

    pub fn without_readout(&self) -> Self {
        Self { readout: Vec::new(), ..self.clone() }
    }

    pub fn is_gate_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.gamma_ad == 0.0
    }

    pub fn readout_for(&self, q: usize) -> ConfusionMatrix {
        match self.readout.len() {
            0 => IDEAL_READOUT,
            1 => self.readout[0],
            _ => self.readout.get(q).copied().unwrap_or(IDEAL_READOUT),
        }
    }

    pub fn has_readout_error(&self) -> bool {
        self.readout.iter().any(|m| *m != IDEAL_READOUT)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p2", self.p2), ("p1", self.p1), ("gamma_ad", self.gamma_ad)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidProbability { name, value: v });
            }
        }
        for m in &self.readout {
            for row in m {
                if row.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
                    return Err(Error::InvalidProbability { name: "readout", value: row[0] });
                }
                if (row[0] + row[1] - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidProbability { name: "readout row sum", value: row[0] + row[1] });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(NoiseModel::default().validate().is_ok());
        let bad = NoiseModel { p2: 1.5, ..NoiseModel::ideal() };
        assert!(matches!(bad.validate(), Err(Error::InvalidProbability { name: "p2", .. })));
        let rows = NoiseModel::ideal().with_readout(vec![[[0.9, 0.2], [0.0, 1.0]]]);
        assert!(rows.validate().is_err());
    }

    #[test]
    fn readout_lookup() {
        let m = NoiseModel::ideal().with_readout(vec![symmetric_flip(0.02), symmetric_flip(0.01)]);
        assert_eq!(m.readout_for(1), symmetric_flip(0.01));
        assert_eq!(m.readout_for(5), IDEAL_READOUT);
        assert_eq!(NoiseModel::default().readout_for(7), symmetric_flip(0.01));
    }
}

use rand::Rng;

use crate::error::{Error, Result};
use crate::sim::{apply_confusion, sample_counts, ConfusionMatrix, NoiseModel, ShotResult};

/// Calibrations with `|det| < MIN_CALIBRATION_DET` on any qubit are rejected.
pub const MIN_CALIBRATION_DET: f64 = 0.05;
/// Largest condition number accepted by [`correct_readout`].
pub const MAX_CONDITION: f64 = 1e6;

/// Estimated per-qubit confusion matrices, `m[true][reported]`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ReadoutCalibration {
    pub matrices: Vec<ConfusionMatrix>,
    /// Shots per prepared state; 0 for an exact calibration.
    pub shots: u64,
}

impl ReadoutCalibration {
    pub fn identity(n_qubits: usize) -> Self {
        Self { matrices: vec![crate::sim::IDEAL_READOUT; n_qubits], shots: 0 }
    }

    /// The confusion matrices of `noise` themselves.
    pub fn exact(noise: &NoiseModel, n_qubits: usize) -> Result<Self> {
        let cal = Self { matrices: (0..n_qubits).map(|q| noise.readout_for(q)).collect(), shots: 0 };
        cal.check()?;
        Ok(cal)
    }

    pub fn n_qubits(&self) -> usize {
        self.matrices.len()
    }

    /// Product of the per-qubit 2-norm condition numbers.
    pub fn condition_number(&self) -> f64 {
        self.matrices.iter().map(cond2).product()
    }

    fn check(&self) -> Result<()> {
        for (qubit, m) in self.matrices.iter().enumerate() {
            let det = det2(m);
            if det.abs() < MIN_CALIBRATION_DET {
                return Err(Error::SingularCalibration { qubit, det });
            }
        }
        Ok(())
    }
}

fn det2(m: &ConfusionMatrix) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn cond2(m: &ConfusionMatrix) -> f64 {
    let fro2: f64 = m.iter().flatten().map(|v| v * v).sum();
    let det = det2(m).abs();
    if det == 0.0 {
        return f64::INFINITY;
    }
    // σ₁² + σ₂² = ‖M‖_F², σ₁σ₂ = |det|
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
    ((fro2 + disc) / (fro2 - disc).max(f64::MIN_POSITIVE)).sqrt()
}

/// Estimate each qubit's confusion matrix by preparing `|0…0⟩` and `|1…1⟩`
/// and histogramming the reported bits.
///
/// State preparation is taken as ideal; only the readout channel of `noise`
/// acts.
pub fn calibrate_readout<R: Rng>(noise: &NoiseModel, n_qubits: usize, shots: u64, rng: &mut R) -> Result<ReadoutCalibration> {
    if shots < 1000 {
        return Err(Error::InvalidInput(format!("calibration needs at least 1000 shots, got {shots}")));
    }
    let dim = 1usize << n_qubits;
    let mut matrices = vec![[[0.0; 2]; 2]; n_qubits];
    for (row, prepared) in [(0usize, 0usize), (1, dim - 1)] {
        let mut ideal = vec![0.0; dim];
        ideal[prepared] = 1.0;
        let counts = sample_counts(&apply_confusion(&ideal, n_qubits, noise), shots, rng)?;
        for (q, m) in matrices.iter_mut().enumerate() {
            let ones: u64 = counts.counts.iter().filter(|(b, _)| *b >> q & 1 == 1).map(|(_, c)| c).sum();
            let p1 = ones as f64 / shots as f64;
            m[row] = [1.0 - p1, p1];
        }
    }
    let cal = ReadoutCalibration { matrices, shots };
    cal.check()?;
    Ok(cal)
}

/// Readout-corrected quasi-probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutCorrection {
    pub quasi: Vec<f64>,
    pub condition_number: f64,
}

/// Invert the tensored confusion model on a probability vector.
pub fn correct_distribution(freq: &[f64], cal: &ReadoutCalibration) -> Result<ReadoutCorrection> {
    let n = cal.n_qubits();
    if freq.len() != 1 << n {
        return Err(Error::DimensionMismatch { expected: n, found: freq.len().trailing_zeros() as usize });
    }
    cal.check()?;
    let condition_number = cal.condition_number();
    if condition_number > MAX_CONDITION {
        return Err(Error::IllConditioned(condition_number));
    }
    let mut p = freq.to_vec();
    for (q, m) in cal.matrices.iter().enumerate() {
        let det = det2(m);
        // observed = Mᵀ true, so true = (Mᵀ)⁻¹ observed
        let inv = [[m[1][1] / det, -m[1][0] / det], [-m[0][1] / det, m[0][0] / det]];
        let bit = 1 << q;
        for b in (0..p.len()).filter(|b| b & bit == 0) {
            let (o0, o1) = (p[b], p[b | bit]);
            p[b] = inv[0][0] * o0 + inv[0][1] * o1;
            p[b | bit] = inv[1][0] * o0 + inv[1][1] * o1;
        }
    }
    Ok(ReadoutCorrection { quasi: p, condition_number })
}

/// [`correct_distribution`] on measured counts.
pub fn correct_readout(counts: &ShotResult, cal: &ReadoutCalibration) -> Result<ReadoutCorrection> {
    correct_distribution(&counts.frequencies(cal.n_qubits()), cal)
}

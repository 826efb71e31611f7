use rand::Rng;

use crate::circuit::Circuit;
use crate::error::Result;
use crate::mitigation::{calibrate_readout, correct_distribution, ReadoutCalibration};
use crate::sim::{evolve, group_distributions, sample_counts, MeasurementPlan, NoiseModel};

/// How expectations are read off the simulated state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShotMode {
    /// Outcome probabilities are used directly; noise channels still act.
    Exact,
    Sampled(u64),
}

/// Value of one observable at one noise factor.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Reading {
    pub raw: f64,
    pub corrected: f64,
}

/// Runs one circuit family (all CNOT foldings) on the emulated device.
#[derive(Debug, Clone)]
pub struct Estimator {
    factors: Vec<i64>,
    circuits: Vec<Circuit>,
    noise: NoiseModel,
    calibration: ReadoutCalibration,
    mode: ShotMode,
}

impl Estimator {
    /// Fold `circuit` at every factor and calibrate readout (sampled in
    /// [`ShotMode::Sampled`], exact otherwise).
    pub fn new<R: Rng>(circuit: &Circuit, noise: &NoiseModel, factors: &[i64], mode: ShotMode, rng: &mut R) -> Result<Self> {
        noise.validate()?;
        let circuits = factors.iter().map(|&m| circuit.fold_cnots(m)).collect::<Result<Vec<_>>>()?;
        let n = circuit.n_qubits();
        let calibration = match mode {
            ShotMode::Exact => ReadoutCalibration::exact(noise, n)?,
            ShotMode::Sampled(shots) => calibrate_readout(noise, n, shots, rng)?,
        };
        Ok(Self { factors: factors.to_vec(), circuits, noise: noise.clone(), calibration, mode })
    }

    pub fn factors(&self) -> &[i64] {
        &self.factors
    }

    pub fn calibration(&self) -> &ReadoutCalibration {
        &self.calibration
    }

    /// Readings of every plan at factor index `k`, all taken on one
    /// simulated state.
    pub fn measure<R: Rng>(&self, k: usize, params: &[f64], plans: &[&MeasurementPlan], rng: &mut R) -> Result<Vec<Reading>> {
        let rho = evolve(&self.circuits[k], params, &self.noise)?;
        plans
            .iter()
            .map(|plan| {
                let dists = group_distributions(&rho, plan, &self.noise);
                let mut raw = Vec::with_capacity(dists.len());
                let mut fixed = Vec::with_capacity(dists.len());
                for d in dists {
                    let freq = match self.mode {
                        ShotMode::Exact => d,
                        ShotMode::Sampled(shots) => sample_counts(&d, shots, rng)?.frequencies(plan.n_qubits),
                    };
                    fixed.push(correct_distribution(&freq, &self.calibration)?.quasi);
                    raw.push(freq);
                }
                Ok(Reading { raw: plan.combine(&raw), corrected: plan.combine(&fixed) })
            })
            .collect()
    }

    /// `series[plan][factor]`.
    pub fn series<R: Rng>(&self, params: &[f64], plans: &[&MeasurementPlan], rng: &mut R) -> Result<Vec<Vec<Reading>>> {
        let mut out = vec![Vec::with_capacity(self.factors.len()); plans.len()];
        for k in 0..self.factors.len() {
            for (p, r) in self.measure(k, params, plans, rng)?.into_iter().enumerate() {
                out[p].push(r);
            }
        }
        Ok(out)
    }
}

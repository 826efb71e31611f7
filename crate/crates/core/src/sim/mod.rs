//! Density-matrix simulation of circuits under gate-local noise, with
//! grouped Pauli measurement and finite-shot sampling.

mod density;
mod measure;
mod noise;

pub use density::{evolve, SIM_LIMIT};
pub use measure::{apply_confusion, group_distributions, sample_counts, MeasurementGroup, MeasurementPlan, ShotResult};
pub use noise::{symmetric_flip, ConfusionMatrix, NoiseModel, IDEAL_READOUT};

use crate::pauli::{expectation, DenseState, PauliSum};
use crate::Result;

/// Exact `Tr(ρ O)`.
pub fn expectation_exact(obs: &PauliSum, rho: &DenseState) -> Result<f64> {
    expectation(obs, rho)
}

//! VQE driver: exact baseline, noisy optimization with mitigation, scans
//! and the X-gate ablation.

mod config;
mod driver;
mod estimator;
mod fci;
mod optim;
mod scan;

pub use config::{CavitySection, EncodingSection, MoleculeSection, NoiseSection, OutputSection, RunConfig, VqeSection};
pub use driver::{mean_rmse, measure_photon_number, vqe_minimize, RepeatResult, StageValues, VqeConfig, VqeResult};
pub use estimator::{Estimator, Reading, ShotMode};
pub use fci::{fci_for, fci_solve, FciSolution, FCI_LIMIT};
pub use optim::{NelderMead, OptResult};
pub use scan::{
    fci_energy, fci_equilibrium, scan_coupling, scan_dissociation, write_scan_csv, xgate_ablation, AblationArm,
    AblationReport, Equilibrium, PointSetup, ScanPoint, ScanRow,
};

#[cfg(test)]
mod tests;

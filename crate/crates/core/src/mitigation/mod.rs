//! Error mitigation: readout correction, zero-noise extrapolation,
//! reference-state rescaling (RS) and reference-state ZNE (rZNE).
//!
//! The stages always run in that order. Readout correction and ZNE act
//! inside every objective evaluation; RS and rZNE only post-process the
//! converged result.

mod readout;
mod rescale;
mod zne;

pub use readout::{
    calibrate_readout, correct_distribution, correct_readout, ReadoutCalibration, ReadoutCorrection, MAX_CONDITION,
    MIN_CALIBRATION_DET,
};
pub use rescale::{rs_rescale, rzne_combine, RzneOutcome, RZNE_MIN_AMPLITUDE};
pub use zne::{fit_exponential, zne_extrapolate, ExpFit, ZneSeries, DEFAULT_ZNE_FACTORS, FIT_MAX_ITER, FIT_STEP_TOL};

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// One mitigation stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Raw,
    Ro,
    Zne,
    Rs,
    Rzne,
}

impl Stage {
    pub const ALL: [Stage; 5] = [Stage::Raw, Stage::Ro, Stage::Zne, Stage::Rs, Stage::Rzne];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Raw => "raw",
            Stage::Ro => "ro",
            Stage::Zne => "zne",
            Stage::Rs => "rs",
            Stage::Rzne => "rzne",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown mitigation stage {s:?}")))
    }
}

/// Per-stage values; `None` for stages that were not requested.
#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize)]
pub struct MitigatedEstimate {
    pub raw: Option<f64>,
    pub readout_corrected: Option<f64>,
    pub zne: Option<f64>,
    pub rs: Option<f64>,
    pub rzne: Option<f64>,
    /// RMSE over repetitions, per stage in [`Stage::ALL`] order.
    pub uncertainty: Option<[f64; 5]>,
}

impl MitigatedEstimate {
    pub fn get(&self, s: Stage) -> Option<f64> {
        match s {
            Stage::Raw => self.raw,
            Stage::Ro => self.readout_corrected,
            Stage::Zne => self.zne,
            Stage::Rs => self.rs,
            Stage::Rzne => self.rzne,
        }
    }

    pub fn set(&mut self, s: Stage, v: f64) {
        let slot = match s {
            Stage::Raw => &mut self.raw,
            Stage::Ro => &mut self.readout_corrected,
            Stage::Zne => &mut self.zne,
            Stage::Rs => &mut self.rs,
            Stage::Rzne => &mut self.rzne,
        };
        *slot = Some(v);
    }
}

use super::zne::ExpFit;
use crate::error::{Error, Result};

/// `|a_r|` below this makes the rZNE ratio meaningless.
pub const RZNE_MIN_AMPLITUDE: f64 = 1e-8;

/// Divide `noisy_value` by `r = reference_noisy / reference_exact`.
pub fn rs_rescale(noisy_value: f64, reference_noisy: f64, reference_exact: f64) -> Result<f64> {
    if reference_exact == 0.0 {
        return Err(Error::InvalidInput("reference with exact value 0 cannot set a rescale factor".into()));
    }
    if reference_noisy == 0.0 {
        return Err(Error::InvalidInput("noisy reference value is 0".into()));
    }
    let r = reference_noisy / reference_exact;
    Ok(noisy_value / r)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RzneOutcome {
    pub value: f64,
    /// `a_r` was too small and the plain ZNE value was returned.
    pub fallback: bool,
}

/// `a_e·(E_ref − c_r)/a_r + c_e`.
pub fn rzne_combine(ref_fit: &ExpFit, vqe_fit: &ExpFit, reference_exact: f64) -> RzneOutcome {
    if ref_fit.a.abs() < RZNE_MIN_AMPLITUDE {
        return RzneOutcome { value: vqe_fit.at_zero(), fallback: true };
    }
    RzneOutcome { value: vqe_fit.a * (reference_exact - ref_fit.c) / ref_fit.a + vqe_fit.c, fallback: false }
}

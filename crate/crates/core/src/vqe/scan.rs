use rayon::prelude::*;

use super::driver::{mean_rmse, vqe_minimize, VqeConfig, VqeResult};
use super::fci::{fci_for, FciSolution};
use crate::chem::{compute_sto3g_h2, CavityParams, Geometry, IntegralSet};
use crate::circuit::Ansatz;
use crate::error::{Error, Result};
use crate::hamiltonian::{encode_problem, EncodedProblem, EncodingPlan};
use crate::mitigation::Stage;
use crate::sim::NoiseModel;

/// Integrals, encoded Hamiltonian and ansatz at one geometry.
#[derive(Debug, Clone)]
pub struct PointSetup {
    pub r_angstrom: f64,
    pub cavity: CavityParams,
    pub integrals: IntegralSet,
    pub problem: EncodedProblem,
    pub ansatz: Ansatz,
}

impl PointSetup {
    pub fn new(r_angstrom: f64, cavity: CavityParams, plan: EncodingPlan) -> Result<Self> {
        let integrals = compute_sto3g_h2(&Geometry::h2(r_angstrom)?)?;
        let problem = encode_problem(&integrals, &cavity, plan)?;
        let ansatz = Ansatz::build(&integrals, &problem)?;
        Ok(Self { r_angstrom, cavity, integrals, problem, ansatz })
    }
}

/// FCI energy of H₂ at `r_angstrom` (encoding-independent).
pub fn fci_energy(r_angstrom: f64, cavity: &CavityParams) -> Result<FciSolution> {
    let ints = compute_sto3g_h2(&Geometry::h2(r_angstrom)?)?;
    fci_for(&encode_problem(&ints, cavity, EncodingPlan::default())?)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Equilibrium {
    pub r_angstrom: f64,
    pub energy: f64,
}

/// Minimum of the FCI curve: grid search with spacing `step`, then a
/// parabola through the lowest point and its neighbours.
pub fn fci_equilibrium(cavity: &CavityParams, lo: f64, hi: f64, step: f64) -> Result<Equilibrium> {
    if !(step > 0.0) || hi - lo < 2.0 * step {
        return Err(Error::InvalidInput("equilibrium grid needs at least three points".into()));
    }
    let n = ((hi - lo) / step).round() as usize + 1;
    let grid: Vec<f64> = (0..n).map(|k| lo + k as f64 * step).collect();
    let e = grid.par_iter().map(|&r| fci_energy(r, cavity).map(|s| s.energy)).collect::<Result<Vec<_>>>()?;
    let k = (0..n).min_by(|&a, &b| e[a].total_cmp(&e[b])).expect("nonempty grid");
    if k == 0 || k == n - 1 {
        return Err(Error::InvalidInput(format!("minimum at the grid edge ({:.4} Å)", grid[k])));
    }
    let (em, e0, ep) = (e[k - 1], e[k], e[k + 1]);
    let curv = em - 2.0 * e0 + ep;
    let shift = 0.5 * step * (em - ep) / curv;
    Ok(Equilibrium { r_angstrom: grid[k] + shift, energy: e0 - 0.125 * (em - ep).powi(2) / curv })
}

/// One scan point; `vqe` is `None` when only the baseline was requested or
/// the run failed (`error` then says why).
#[derive(Debug, Clone, serde::Serialize)]
pub struct ScanPoint {
    pub r_angstrom: f64,
    pub lambda_x: f64,
    pub e_fci: f64,
    pub n_fci: f64,
    pub vqe: Option<VqeResult>,
    pub error: Option<String>,
}

impl ScanPoint {
    pub fn energy_error(&self, s: Stage) -> Option<f64> {
        self.vqe.as_ref()?.energy.get(s).map(|e| e - self.e_fci)
    }
}

fn run_point(r: f64, cavity: CavityParams, plan: EncodingPlan, noise: &NoiseModel, cfg: &VqeConfig, index: usize) -> ScanPoint {
    let lambda_x = cavity.lambda[0];
    let go = || -> Result<(FciSolution, VqeResult)> {
        let s = PointSetup::new(r, cavity, plan)?;
        let fci = fci_for(&s.problem)?;
        let cfg = VqeConfig { seed: cfg.seed.wrapping_add(7919 * index as u64), ..cfg.clone() };
        Ok((fci.clone(), vqe_minimize(&s.problem, &s.ansatz, noise, &cfg)?))
    };
    match go() {
        Ok((fci, v)) => {
            ScanPoint { r_angstrom: r, lambda_x, e_fci: fci.energy, n_fci: fci.photon_number, vqe: Some(v), error: None }
        }
        Err(e) => {
            let (e_fci, n_fci) = fci_energy(r, &cavity).map(|f| (f.energy, f.photon_number)).unwrap_or((f64::NAN, f64::NAN));
            ScanPoint { r_angstrom: r, lambda_x, e_fci, n_fci, vqe: None, error: Some(e.to_string()) }
        }
    }
}

/// Bond-length scan at fixed cavity; points run in parallel and come back in
/// grid order.
pub fn scan_dissociation(
    r_values: &[f64],
    cavity: CavityParams,
    plan: EncodingPlan,
    noise: &NoiseModel,
    cfg: &VqeConfig,
) -> Result<Vec<ScanPoint>> {
    if r_values.is_empty() {
        return Err(Error::InvalidInput("empty bond-length grid".into()));
    }
    Ok(r_values.par_iter().enumerate().map(|(k, &r)| run_point(r, cavity, plan, noise, cfg, k)).collect())
}

/// Coupling scan along `λ_x`, each point at the FCI equilibrium bond length
/// for its coupling.
pub fn scan_coupling(
    lambda_values: &[f64],
    omega_ev: f64,
    n_photon_max: usize,
    plan: EncodingPlan,
    noise: &NoiseModel,
    cfg: &VqeConfig,
) -> Result<Vec<ScanPoint>> {
    if lambda_values.is_empty() {
        return Err(Error::InvalidInput("empty coupling grid".into()));
    }
    Ok(lambda_values
        .par_iter()
        .enumerate()
        .map(|(k, &l)| {
            let cav = CavityParams::from_ev(omega_ev, [l, 0.0, 0.0], n_photon_max)?;
            let eq = fci_equilibrium(&cav, 0.60, 0.90, 0.005)?;
            Ok(run_point(eq.r_angstrom, cav, plan, noise, cfg, k))
        })
        .collect::<Result<Vec<_>>>()?)
}

/// One arm of the X-gate ablation.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct AblationArm {
    pub label: String,
    pub x_gates: usize,
    pub energies: Vec<f64>,
    pub mean_energy: f64,
    pub std_dev: f64,
    /// Mean of `|E − E_FCI|` over repeats.
    pub mean_abs_error: f64,
    pub percent_error: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct AblationReport {
    pub e_fci: f64,
    pub stage: Stage,
    pub with_x: AblationArm,
    pub sign_flipped: AblationArm,
}

impl AblationReport {
    /// `|Δ mean error|` in units of the standard error of that difference.
    pub fn gap_sigmas(&self) -> f64 {
        let (a, b) = (&self.with_x, &self.sign_flipped);
        let se = |arm: &AblationArm| {
            let errs: Vec<f64> = arm.energies.iter().map(|e| (e - self.e_fci).abs()).collect();
            let (_, s) = mean_rmse(&errs);
            s * s / errs.len() as f64
        };
        (a.mean_abs_error - b.mean_abs_error).abs() / (se(a) + se(b)).sqrt()
    }
}

/// Tapered-encoding VQE with the reference prepared by X gates versus the
/// sign-flipped Hamiltonian started from `|0…0⟩`; both arms share seeds.
/// Energies are compared in `stage`.
pub fn xgate_ablation(
    r_angstrom: f64,
    cavity: CavityParams,
    noise: &NoiseModel,
    cfg: &VqeConfig,
    stage: Stage,
) -> Result<AblationReport> {
    if !cfg.uses(stage) {
        return Err(Error::InvalidInput(format!("stage {stage} is not in the mitigation stack")));
    }
    let arm = |flip: bool| -> Result<(f64, AblationArm)> {
        let s = PointSetup::new(r_angstrom, cavity, EncodingPlan::bk_tapered().with_sign_flip(flip))?;
        let fci = fci_for(&s.problem)?;
        let v = vqe_minimize(&s.problem, &s.ansatz, noise, cfg)?;
        let energies: Vec<f64> = v.repeats.iter().map(|r| r.energy.values.get(stage).expect("stage requested")).collect();
        let (mean_energy, std_dev) = mean_rmse(&energies);
        let mean_abs_error = energies.iter().map(|e| (e - fci.energy).abs()).sum::<f64>() / energies.len() as f64;
        let x_gates = s.ansatz.circuit.gates().iter().filter(|g| g.kind() == "X").count();
        let label = if flip { "sign-flipped |0>" } else { "X-gate |1>" }.to_string();
        Ok((
            fci.energy,
            AblationArm {
                label,
                x_gates,
                percent_error: 100.0 * ((mean_energy - fci.energy) / fci.energy).abs(),
                energies,
                mean_energy,
                std_dev,
                mean_abs_error,
            },
        ))
    };
    let (e_fci, with_x) = arm(false)?;
    let (_, sign_flipped) = arm(true)?;
    Ok(AblationReport { e_fci, stage, with_x, sign_flipped })
}

/// Flat CSV record of a scan point.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[allow(non_snake_case)]
pub struct ScanRow {
    pub R: f64,
    pub lambda_x: f64,
    pub E_fci: f64,
    pub E_raw: Option<f64>,
    pub E_ro: Option<f64>,
    pub E_zne: Option<f64>,
    pub E_rs: Option<f64>,
    pub E_rzne: Option<f64>,
    pub rmse_raw: Option<f64>,
    pub rmse_ro: Option<f64>,
    pub rmse_zne: Option<f64>,
    pub rmse_rs: Option<f64>,
    pub rmse_rzne: Option<f64>,
    pub n_fci: f64,
    pub n_raw: Option<f64>,
    pub n_ro: Option<f64>,
    pub n_zne: Option<f64>,
    pub n_rs: Option<f64>,
    pub n_rzne: Option<f64>,
    pub iterations_mean: Option<f64>,
    pub iterations_std: Option<f64>,
}

impl From<&ScanPoint> for ScanRow {
    fn from(p: &ScanPoint) -> Self {
        let v = p.vqe.as_ref();
        let e = |s: Stage| v.and_then(|v| v.energy.get(s));
        let n = |s: Stage| v.and_then(|v| v.photon_number.get(s));
        let rmse = |s: Stage| {
            let k = Stage::ALL.iter().position(|&x| x == s).expect("known stage");
            v.and_then(|v| v.energy.get(s).and(v.energy.uncertainty.map(|u| u[k])))
        };
        ScanRow {
            R: p.r_angstrom,
            lambda_x: p.lambda_x,
            E_fci: p.e_fci,
            E_raw: e(Stage::Raw),
            E_ro: e(Stage::Ro),
            E_zne: e(Stage::Zne),
            E_rs: e(Stage::Rs),
            E_rzne: e(Stage::Rzne),
            rmse_raw: rmse(Stage::Raw),
            rmse_ro: rmse(Stage::Ro),
            rmse_zne: rmse(Stage::Zne),
            rmse_rs: rmse(Stage::Rs),
            rmse_rzne: rmse(Stage::Rzne),
            n_fci: p.n_fci,
            n_raw: n(Stage::Raw),
            n_ro: n(Stage::Ro),
            n_zne: n(Stage::Zne),
            n_rs: n(Stage::Rs),
            n_rzne: n(Stage::Rzne),
            iterations_mean: v.map(|v| v.iterations_mean),
            iterations_std: v.map(|v| v.iterations_std),
        }
    }
}

/// Write scan points as CSV with a header row.
pub fn write_scan_csv<W: std::io::Write>(w: W, points: &[ScanPoint]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for p in points {
        out.serialize(ScanRow::from(p)).map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
    }
    out.flush()?;
    Ok(())
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::estimator::{Estimator, Reading, ShotMode};
use super::optim::NelderMead;
use crate::circuit::Ansatz;
use crate::error::{Error, Result};
use crate::hamiltonian::EncodedProblem;
use crate::mitigation::{rs_rescale, rzne_combine, zne_extrapolate, MitigatedEstimate, Stage, ZneSeries, DEFAULT_ZNE_FACTORS};
use crate::pauli::{expectation, DenseState, PauliSum};
use crate::sim::{MeasurementPlan, NoiseModel};

/// Protocol settings of a VQE run.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct VqeConfig {
    pub shots: u64,
    /// Use outcome probabilities instead of sampling.
    pub exact_expectations: bool,
    pub n_repeats: usize,
    /// Measurements of the reference state averaged for RS and rZNE.
    pub ref_repeats: usize,
    pub zne_factors: Vec<i64>,
    pub mitigation: Vec<Stage>,
    pub optimizer: NelderMead,
    pub seed: u64,
}

impl Default for VqeConfig {
    fn default() -> Self {
        Self {
            shots: 20_000,
            exact_expectations: false,
            n_repeats: 10,
            ref_repeats: 50,
            zne_factors: DEFAULT_ZNE_FACTORS.to_vec(),
            mitigation: Stage::ALL.to_vec(),
            optimizer: NelderMead::default(),
            seed: 7,
        }
    }
}

impl VqeConfig {
    /// Noise-free, sampling-free settings for exactness checks.
    pub fn exact() -> Self {
        Self { exact_expectations: true, n_repeats: 1, mitigation: vec![Stage::Raw], ..Self::default() }
    }

    pub fn uses(&self, s: Stage) -> bool {
        s == Stage::Raw || self.mitigation.contains(&s)
    }

    pub fn mode(&self) -> ShotMode {
        if self.exact_expectations {
            ShotMode::Exact
        } else {
            ShotMode::Sampled(self.shots)
        }
    }

    fn needs_series(&self) -> bool {
        self.uses(Stage::Zne) || self.uses(Stage::Rzne)
    }

    fn factors(&self) -> Vec<i64> {
        if self.needs_series() {
            self.zne_factors.clone()
        } else {
            vec![1]
        }
    }

    /// Stage minimized by the optimizer.
    pub fn objective_stage(&self) -> Stage {
        if self.uses(Stage::Zne) {
            Stage::Zne
        } else if self.uses(Stage::Ro) {
            Stage::Ro
        } else {
            Stage::Raw
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_repeats == 0 {
            return Err(Error::InvalidInput("n_repeats must be at least 1".into()));
        }
        if !self.exact_expectations && self.shots < 1000 {
            return Err(Error::InvalidInput("shots must be at least 1000".into()));
        }
        if (self.uses(Stage::Rs) || self.uses(Stage::Rzne)) && self.ref_repeats == 0 {
            return Err(Error::InvalidInput("ref_repeats must be at least 1".into()));
        }
        if self.needs_series() {
            if self.zne_factors.first() != Some(&1) {
                return Err(Error::InvalidInput("zne_factors must start at 1".into()));
            }
            ZneSeries::fit(&self.zne_factors, &vec![0.0; self.zne_factors.len()])?;
        }
        Ok(())
    }

    fn repeat_seed(&self, repeat: usize) -> u64 {
        self.seed.wrapping_mul(1_000_003).wrapping_add(repeat as u64)
    }
}

/// Final post-processed values of one observable.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct StageValues {
    pub values: MitigatedEstimate,
    pub series: Option<ZneSeries>,
    pub reference_series: Option<ZneSeries>,
    pub rescale_factor: Option<f64>,
    /// A fit fell back to its linear estimate or `a_r` was too small.
    pub fit_fallback: bool,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RepeatResult {
    pub seed: u64,
    pub params: Vec<f64>,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub first_objective: f64,
    pub energy: StageValues,
    /// Photon number `⟨b†b⟩` per stage.
    pub photon: StageValues,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct VqeResult {
    /// Means over repeats; `uncertainty` holds the RMSE per stage.
    pub energy: MitigatedEstimate,
    pub photon_number: MitigatedEstimate,
    /// Element-wise mean of the per-repeat optima.
    pub params_opt: Vec<f64>,
    pub iterations_mean: f64,
    pub iterations_std: f64,
    pub reference_energy: f64,
    pub repeats: Vec<RepeatResult>,
}

/// Mean and root-mean-square deviation from the mean.
pub fn mean_rmse(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (mean, (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt())
}

struct Observable {
    plan: MeasurementPlan,
    exact_reference: f64,
    identity: f64,
}

impl Observable {
    fn new(op: &PauliSum, reference: &DenseState) -> Result<Self> {
        Ok(Self {
            plan: MeasurementPlan::new(op)?,
            exact_reference: expectation(op, reference)?,
            identity: op.identity_coefficient().re,
        })
    }
}

fn base(cfg: &VqeConfig, r: &Reading) -> f64 {
    if cfg.uses(Stage::Ro) {
        r.corrected
    } else {
        r.raw
    }
}

fn post_process<R: Rng>(
    est: &Estimator,
    obs: &[&Observable],
    params: &[f64],
    cfg: &VqeConfig,
    rng: &mut R,
) -> Result<Vec<StageValues>> {
    let plans: Vec<&MeasurementPlan> = obs.iter().map(|o| &o.plan).collect();
    let target = est.series(params, &plans, rng)?;
    let reference = if cfg.uses(Stage::Rs) || cfg.uses(Stage::Rzne) {
        let zeros = vec![0.0; params.len()];
        let mut acc = vec![vec![0.0; est.factors().len()]; obs.len()];
        for _ in 0..cfg.ref_repeats {
            for (p, s) in est.series(&zeros, &plans, rng)?.iter().enumerate() {
                for (k, r) in s.iter().enumerate() {
                    acc[p][k] += base(cfg, r) / cfg.ref_repeats as f64;
                }
            }
        }
        Some(acc)
    } else {
        None
    };

    obs.iter()
        .enumerate()
        .map(|(p, o)| {
            let t = &target[p];
            let mut v = MitigatedEstimate { raw: Some(t[0].raw), ..Default::default() };
            if cfg.uses(Stage::Ro) {
                v.readout_corrected = Some(t[0].corrected);
            }
            let vals: Vec<f64> = t.iter().map(|r| base(cfg, r)).collect();
            let mut out = StageValues { values: v, series: None, reference_series: None, rescale_factor: None, fit_fallback: false };
            if cfg.needs_series() {
                let s = ZneSeries::fit(est.factors(), &vals)?;
                out.fit_fallback |= s.linear_fallback;
                if cfg.uses(Stage::Zne) {
                    out.values.zne = Some(zne_extrapolate(&s));
                }
                out.series = Some(s);
            }
            if let Some(refs) = &reference {
                let rv = &refs[p];
                if cfg.uses(Stage::Rs) {
                    let id = o.identity;
                    let rs = rs_rescale(vals[0] - id, rv[0] - id, o.exact_reference - id)?;
                    out.rescale_factor = Some((rv[0] - id) / (o.exact_reference - id));
                    out.values.rs = Some(rs + id);
                }
                if cfg.uses(Stage::Rzne) {
                    let rs = ZneSeries::fit(est.factors(), rv)?;
                    let ts = out.series.as_ref().expect("series fitted");
                    let value = if rs.linear_fallback || ts.linear_fallback {
                        out.fit_fallback = true;
                        zne_extrapolate(ts)
                    } else {
                        let c = rzne_combine(&rs.fit, &ts.fit, o.exact_reference);
                        out.fit_fallback |= c.fallback;
                        c.value
                    };
                    out.values.rzne = Some(value);
                    out.reference_series = Some(rs);
                }
            }
            Ok(out)
        })
        .collect()
}

/// Per-stage `⟨b†b⟩ = (1 − S)/2` from the surrogate `S = I − 2b†b`.
fn photon_from_surrogate(mut s: StageValues) -> StageValues {
    let v = &mut s.values;
    for st in Stage::ALL {
        if let Some(x) = v.get(st) {
            v.set(st, 0.5 * (1.0 - x));
        }
    }
    s
}

fn objective<R: Rng>(est: &Estimator, h: &Observable, x: &[f64], cfg: &VqeConfig, rng: &mut R) -> Result<f64> {
    if cfg.uses(Stage::Zne) {
        let s = est.series(x, &[&h.plan], rng)?;
        let vals: Vec<f64> = s[0].iter().map(|r| base(cfg, r)).collect();
        Ok(zne_extrapolate(&ZneSeries::fit(est.factors(), &vals)?))
    } else {
        Ok(base(cfg, &est.measure(0, x, &[&h.plan], rng)?[0]))
    }
}

fn reference_state(ansatz: &Ansatz) -> Result<DenseState> {
    let zeros = vec![0.0; ansatz.n_params()];
    Ok(DenseState::Statevector { n_qubits: ansatz.circuit.n_qubits(), amps: ansatz.circuit.statevector(&zeros)? })
}

fn run_repeat(
    ansatz: &Ansatz,
    noise: &NoiseModel,
    cfg: &VqeConfig,
    h: &Observable,
    s: &Observable,
    seed: u64,
) -> Result<RepeatResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let est = Estimator::new(&ansatz.circuit, noise, &cfg.factors(), cfg.mode(), &mut rng)?;
    let x0 = vec![0.0; ansatz.n_params()];
    let mut first = None;
    let mut failure = None;
    let opt = cfg.optimizer.minimize(
        |x| match objective(&est, h, x, cfg, &mut rng) {
            Ok(v) => {
                first.get_or_insert(v);
                v
            }
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
        &x0,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let mut post = post_process(&est, &[h, s], &opt.x, cfg, &mut rng)?;
    let photon = photon_from_surrogate(post.pop().expect("two observables"));
    let energy = post.pop().expect("two observables");
    Ok(RepeatResult {
        seed,
        params: opt.x,
        iterations: opt.iterations,
        evaluations: opt.evaluations,
        converged: opt.converged,
        first_objective: first.unwrap_or(f64::NAN),
        energy,
        photon,
    })
}

fn aggregate(repeats: &[RepeatResult], pick: impl Fn(&RepeatResult) -> &MitigatedEstimate) -> MitigatedEstimate {
    let mut out = MitigatedEstimate::default();
    let mut unc = [f64::NAN; 5];
    for (k, st) in Stage::ALL.into_iter().enumerate() {
        let v: Option<Vec<f64>> = repeats.iter().map(|r| pick(r).get(st)).collect();
        if let Some(v) = v {
            let (m, e) = mean_rmse(&v);
            out.set(st, m);
            unc[k] = e;
        }
    }
    out.uncertainty = Some(unc);
    out
}

/// Minimize the mitigated energy `cfg.n_repeats` times with independent
/// seeds, starting from all-zero parameters, then post-process each optimum
/// with every requested stage.
pub fn vqe_minimize(problem: &EncodedProblem, ansatz: &Ansatz, noise: &NoiseModel, cfg: &VqeConfig) -> Result<VqeResult> {
    cfg.validate()?;
    if ansatz.circuit.n_qubits() != problem.n_qubits {
        return Err(Error::SizeMismatch(ansatz.circuit.n_qubits(), problem.n_qubits));
    }
    let reference = reference_state(ansatz)?;
    let h = Observable::new(&problem.hamiltonian, &reference)?;
    let s = Observable::new(&problem.photon_surrogate(), &reference)?;
    let repeats = (0..cfg.n_repeats)
        .into_par_iter()
        .map(|k| run_repeat(ansatz, noise, cfg, &h, &s, cfg.repeat_seed(k)))
        .collect::<Result<Vec<_>>>()?;
    let np = ansatz.n_params();
    let params_opt =
        (0..np).map(|i| repeats.iter().map(|r| r.params[i]).sum::<f64>() / repeats.len() as f64).collect();
    let iters: Vec<f64> = repeats.iter().map(|r| r.iterations as f64).collect();
    let (iterations_mean, iterations_std) = mean_rmse(&iters);
    Ok(VqeResult {
        energy: aggregate(&repeats, |r| &r.energy.values),
        photon_number: aggregate(&repeats, |r| &r.photon.values),
        params_opt,
        iterations_mean,
        iterations_std,
        reference_energy: h.exact_reference,
        repeats,
    })
}

/// Photon number at fixed parameters, measured through the surrogate
/// `S = I − 2b†b` (`ZZ` in the tapered encoding) with every requested stage.
pub fn measure_photon_number(
    problem: &EncodedProblem,
    ansatz: &Ansatz,
    params: &[f64],
    noise: &NoiseModel,
    cfg: &VqeConfig,
    seed: u64,
) -> Result<StageValues> {
    cfg.validate()?;
    if params.len() != ansatz.n_params() {
        return Err(Error::DimensionMismatch { expected: ansatz.n_params(), found: params.len() });
    }
    let reference = reference_state(ansatz)?;
    let s = Observable::new(&problem.photon_surrogate(), &reference)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let est = Estimator::new(&ansatz.circuit, noise, &cfg.factors(), cfg.mode(), &mut rng)?;
    let mut v = post_process(&est, &[&s], params, cfg, &mut rng)?;
    Ok(photon_from_surrogate(v.pop().expect("one observable")))
}

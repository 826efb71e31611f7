use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use cavity_vqe::chem::{compute_sto3g_h2, save_integrals, Geometry};
use cavity_vqe::hamiltonian::EncodingPlan;
use cavity_vqe::mitigation::Stage;
use cavity_vqe::vqe::{
    fci_for, scan_coupling, scan_dissociation, vqe_minimize, write_scan_csv, xgate_ablation, PointSetup, RunConfig,
    ScanPoint, VqeConfig,
};

#[derive(Parser)]
#[command(name = "cavity-vqe", version, about = "Polaritonic VQE for H2 in an optical cavity on an emulated noisy device")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Bond length in Å (overrides [molecule] R_angstrom).
    #[arg(long)]
    r: Option<f64>,
    /// Coupling λ_x in a.u. (overrides [cavity] lambda_x).
    #[arg(long)]
    lambda_x: Option<f64>,
    /// Cavity frequency in eV (overrides [cavity] omega_ev).
    #[arg(long)]
    omega_ev: Option<f64>,
    /// Number of VQE repeats (overrides [vqe] repeats).
    #[arg(long)]
    repeats: Option<usize>,
    /// Seed base (overrides [output] seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Switch every noise channel off.
    #[arg(long)]
    ideal: bool,
    /// Use outcome probabilities instead of sampling shots.
    #[arg(long)]
    exact: bool,
    /// CSV output path (overrides [output] csv).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// JSON manifest path (overrides [output] json).
    #[arg(long)]
    json: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p).with_context(|| format!("reading {}", p.display()))?,
            None => RunConfig::default(),
        };
        if let Some(r) = self.r {
            cfg.molecule.r_angstrom = r;
        }
        if let Some(l) = self.lambda_x {
            cfg.cavity.lambda_x = l;
        }
        if let Some(w) = self.omega_ev {
            cfg.cavity.omega_ev = w;
        }
        if let Some(n) = self.repeats {
            cfg.vqe.repeats = n;
        }
        if let Some(s) = self.seed {
            cfg.output.seed = s;
        }
        if self.ideal {
            cfg.noise.enabled = false;
        }
        if self.exact {
            cfg.vqe.exact = true;
        }
        if self.csv.is_some() {
            cfg.output.csv = self.csv.clone();
        }
        if self.json.is_some() {
            cfg.output.json = self.json.clone();
        }
        // round-trip through the validating parser
        Ok(RunConfig::from_toml_str(&cfg.to_toml_string())?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write the STO-3G integral file for one geometry.
    Integrals {
        #[command(flatten)]
        common: Common,
        /// Output path; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Exact ground state at one geometry.
    Fci {
        #[command(flatten)]
        common: Common,
    },
    /// Noisy VQE with the configured mitigation stack at one geometry.
    Vqe {
        #[command(flatten)]
        common: Common,
    },
    /// Bond-length scan.
    ScanR {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.5)]
        r_min: f64,
        #[arg(long, default_value_t = 2.3)]
        r_max: f64,
        #[arg(long, default_value_t = 10)]
        points: usize,
    },
    /// Coupling scan, each point at its FCI equilibrium bond length.
    ScanLambda {
        #[command(flatten)]
        common: Common,
        /// Comma-separated λ_x values.
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.05, 0.1, 0.15, 0.2])]
        lambdas: Vec<f64>,
    },
    /// Compare X-gate reference preparation with the sign-flipped |0> start.
    AblateXgate {
        #[command(flatten)]
        common: Common,
        /// Stage whose energies are compared.
        #[arg(long, default_value = "raw")]
        stage: Stage,
    },
    /// Qubit, CNOT and parameter counts of every encoding.
    Resources {
        #[command(flatten)]
        common: Common,
        /// Also write the configured encoding's qubit Hamiltonian as Pauli text.
        #[arg(long)]
        hamiltonian: Option<PathBuf>,
    },
}

fn write_manifest(path: &Path, command: &str, cfg: &RunConfig, seeds: Vec<u64>, results: Value) -> Result<()> {
    let manifest = json!({
        "command": command,
        "config": cfg,
        "seeds": seeds,
        "versions": {
            "cavity-vqe": cavity_vqe::VERSION,
            "cli": env!("CARGO_PKG_VERSION"),
        },
        "results": results,
    });
    let mut f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    serde_json::to_writer_pretty(&mut f, &manifest)?;
    writeln!(f)?;
    Ok(())
}

fn repeat_seeds(points: &[ScanPoint]) -> Vec<u64> {
    points.iter().filter_map(|p| p.vqe.as_ref()).flat_map(|v| v.repeats.iter().map(|r| r.seed)).collect()
}

fn emit_scan(command: &str, cfg: &RunConfig, points: &[ScanPoint]) -> Result<()> {
    match &cfg.output.csv {
        Some(p) => write_scan_csv(File::create(p).with_context(|| format!("creating {}", p.display()))?, points)?,
        None => write_scan_csv(io::stdout().lock(), points)?,
    }
    for p in points.iter().filter(|p| p.error.is_some()) {
        eprintln!("R = {:.4}, lambda_x = {}: {}", p.r_angstrom, p.lambda_x, p.error.as_deref().unwrap_or_default());
    }
    if let Some(j) = &cfg.output.json {
        write_manifest(j, command, cfg, repeat_seeds(points), serde_json::to_value(points)?)?;
    }
    Ok(())
}

fn print_stages(label: &str, e: &cavity_vqe::mitigation::MitigatedEstimate, reference: f64) {
    println!("{label}");
    for (k, st) in Stage::ALL.into_iter().enumerate() {
        if let Some(v) = e.get(st) {
            let rmse = e.uncertainty.map(|u| u[k]).unwrap_or(f64::NAN);
            println!("  {:<5} {:>14.8}  err {:>+11.3e}  rmse {:.3e}", st.name(), v, v - reference, rmse);
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Integrals { common, out } => {
            let cfg = common.load()?;
            let ints = compute_sto3g_h2(&Geometry::h2(cfg.molecule.r_angstrom)?)?;
            let cav = cfg.cavity()?;
            match out {
                Some(p) => save_integrals(&p, &ints, &cav)?,
                None => print!("{}", cavity_vqe::chem::integrals_to_string(&ints, &cav)),
            }
        }
        Command::Fci { common } => {
            let cfg = common.load()?;
            let s = PointSetup::new(cfg.molecule.r_angstrom, cfg.cavity()?, cfg.plan())?;
            let fci = fci_for(&s.problem)?;
            println!("R_angstrom    {}", cfg.molecule.r_angstrom);
            println!("encoding      {} ({} qubits)", cfg.plan().label(), s.problem.n_qubits);
            println!("E_fci         {:.10}", fci.energy);
            println!("photon_number {:.6e}", fci.photon_number);
            println!("residual      {:.1e}", fci.residual);
            if let Some(j) = &cfg.output.json {
                let res = json!({ "E_fci": fci.energy, "n_fci": fci.photon_number, "residual": fci.residual });
                write_manifest(j, "fci", &cfg, vec![], res)?;
            }
        }
        Command::Vqe { common } => {
            let cfg = common.load()?;
            let s = PointSetup::new(cfg.molecule.r_angstrom, cfg.cavity()?, cfg.plan())?;
            let fci = fci_for(&s.problem)?;
            let v = vqe_minimize(&s.problem, &s.ansatz, &cfg.noise_model(), &cfg.vqe_config())?;
            println!("E_fci {:.8}  n_fci {:.6e}  E_qed_hf {:.8}", fci.energy, fci.photon_number, v.reference_energy);
            print_stages("energy (Ha)", &v.energy, fci.energy);
            print_stages("photon number", &v.photon_number, fci.photon_number);
            println!("iterations {:.1} +/- {:.1}", v.iterations_mean, v.iterations_std);
            let point = ScanPoint {
                r_angstrom: cfg.molecule.r_angstrom,
                lambda_x: cfg.cavity.lambda_x,
                e_fci: fci.energy,
                n_fci: fci.photon_number,
                vqe: Some(v),
                error: None,
            };
            if let Some(p) = &cfg.output.csv {
                write_scan_csv(File::create(p)?, std::slice::from_ref(&point))?;
            }
            if let Some(j) = &cfg.output.json {
                write_manifest(j, "vqe", &cfg, repeat_seeds(std::slice::from_ref(&point)), serde_json::to_value(&point)?)?;
            }
        }
        Command::ScanR { common, r_min, r_max, points } => {
            let cfg = common.load()?;
            if points == 0 || !(r_max >= r_min) {
                bail!("need points >= 1 and r_max >= r_min");
            }
            let step = if points > 1 { (r_max - r_min) / (points - 1) as f64 } else { 0.0 };
            let rs: Vec<f64> = (0..points).map(|k| r_min + step * k as f64).collect();
            let pts = scan_dissociation(&rs, cfg.cavity()?, cfg.plan(), &cfg.noise_model(), &cfg.vqe_config())?;
            emit_scan("scan-r", &cfg, &pts)?;
        }
        Command::ScanLambda { common, lambdas } => {
            let cfg = common.load()?;
            let c = &cfg.cavity;
            let pts = scan_coupling(&lambdas, c.omega_ev, c.n_photon_max, cfg.plan(), &cfg.noise_model(), &cfg.vqe_config())?;
            emit_scan("scan-lambda", &cfg, &pts)?;
        }
        Command::AblateXgate { common, stage } => {
            let mut cfg = common.load()?;
            if common.repeats.is_none() {
                cfg.vqe.repeats = 20;
            }
            let mut vc: VqeConfig = cfg.vqe_config();
            if !vc.uses(stage) {
                vc.mitigation.push(stage);
            }
            let rep = xgate_ablation(cfg.molecule.r_angstrom, cfg.cavity()?, &cfg.noise_model(), &vc, stage)?;
            println!("E_fci {:.8}  stage {}  repeats {}", rep.e_fci, rep.stage, vc.n_repeats);
            println!("{:<18} {:>7} {:>14} {:>10} {:>12} {:>12}", "variant", "X gates", "mean E", "% error", "std", "mean |err|");
            for a in [&rep.with_x, &rep.sign_flipped] {
                println!(
                    "{:<18} {:>7} {:>14.8} {:>10.4} {:>12.3e} {:>12.3e}",
                    a.label, a.x_gates, a.mean_energy, a.percent_error, a.std_dev, a.mean_abs_error
                );
            }
            println!("gap {:.2} sigma", rep.gap_sigmas());
            if let Some(j) = &cfg.output.json {
                let seeds = (0..vc.n_repeats).map(|k| vc.seed.wrapping_mul(1_000_003).wrapping_add(k as u64)).collect();
                write_manifest(j, "ablate-xgate", &cfg, seeds, serde_json::to_value(&rep)?)?;
            }
        }
        Command::Resources { common, hamiltonian } => {
            let cfg = common.load()?;
            let cav = cfg.cavity()?;
            let mut rows = Vec::new();
            println!("{:<28} {:>6} {:>6} {:>6} {:>10}", "encoding", "qubits", "CNOTs", "params", "1q gates");
            let mut plans = vec![EncodingPlan::jw(), EncodingPlan::bk(), EncodingPlan::bk_tapered(), EncodingPlan::default()];
            if !plans.contains(&cfg.plan()) {
                plans.push(cfg.plan());
            }
            for plan in plans {
                let s = PointSetup::new(cfg.molecule.r_angstrom, cav, plan)?;
                let r = s.ansatz.circuit.resources();
                println!("{:<28} {:>6} {:>6} {:>6} {:>10}", plan.label(), r.qubits, r.cnots, r.params, r.single_qubit_gates);
                rows.push(json!({ "encoding": plan.label(), "resources": r, "pool": s.ansatz.pool.labels() }));
            }
            if let Some(p) = hamiltonian {
                let s = PointSetup::new(cfg.molecule.r_angstrom, cav, cfg.plan())?;
                std::fs::write(&p, s.problem.hamiltonian.to_text()).with_context(|| format!("writing {}", p.display()))?;
            }
            if let Some(j) = &cfg.output.json {
                write_manifest(j, "resources", &cfg, vec![], Value::Array(rows))?;
            }
        }
    }
    Ok(())
}

fn main() -> std::process::ExitCode {
    match run(Cli::parse()) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::ExitCode::FAILURE
        }
    }
}

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::chem::{compute_sto3g_h2, CavityParams, Geometry};
use crate::circuit::Ansatz;
use crate::hamiltonian::{encode_problem, EncodedProblem, EncodingPlan};
use crate::mitigation::{zne_extrapolate, Stage, ZneSeries};
use crate::pauli::{expectation, DenseState};
use crate::sim::NoiseModel;

fn setup(r: f64, omega_ev: f64, lx: f64, plan: EncodingPlan) -> (EncodedProblem, Ansatz) {
    let ints = compute_sto3g_h2(&Geometry::h2(r).unwrap()).unwrap();
    let cav = CavityParams::from_ev(omega_ev, [lx, 0.0, 0.0], 1).unwrap();
    let p = encode_problem(&ints, &cav, plan).unwrap();
    let a = Ansatz::build(&ints, &p).unwrap();
    (p, a)
}

fn small_cfg() -> VqeConfig {
    VqeConfig {
        shots: 2000,
        n_repeats: 3,
        ref_repeats: 2,
        zne_factors: vec![1, 3, 5, 51],
        optimizer: NelderMead { max_iter: 25, ..NelderMead::default() },
        ..VqeConfig::default()
    }
}

#[test]
fn noiseless_vqe_hits_fci() {
    let (p, a) = setup(0.735, 2.0, 0.1, EncodingPlan::default());
    let fci = fci_for(&p).unwrap();
    assert!(fci.residual < 1e-10);
    let r = vqe_minimize(&p, &a, &NoiseModel::ideal(), &VqeConfig::exact()).unwrap();
    assert!((r.energy.raw.unwrap() - fci.energy).abs() < 1e-7);
    assert!((r.repeats[0].first_objective - r.reference_energy).abs() < 1e-12);
    assert!((r.photon_number.raw.unwrap() - fci.photon_number).abs() < 1e-6);
}

#[test]
fn jw_noiseless_vqe_hits_fci() {
    let (p, a) = setup(1.1, 2.0, 0.05, EncodingPlan::jw());
    let fci = fci_for(&p).unwrap();
    let r = vqe_minimize(&p, &a, &NoiseModel::ideal(), &VqeConfig::exact()).unwrap();
    assert!((r.energy.raw.unwrap() - fci.energy).abs() < 1e-6);
}

#[test]
fn fci_paths_agree_and_decouple() {
    let (t, _) = setup(0.9, 2.0, 0.1, EncodingPlan::default());
    let (j, _) = setup(0.9, 2.0, 0.1, EncodingPlan::jw());
    assert!((fci_for(&t).unwrap().energy - fci_for(&j).unwrap().energy).abs() < 1e-9);
    let (z, _) = setup(0.9, 2.0, 0.0, EncodingPlan::jw());
    assert_eq!(fci_for(&z).unwrap().photon_number.abs(), 0.0);
}

#[test]
fn fci_size_guard() {
    let h = crate::pauli::PauliSum::zero(13);
    assert!(matches!(fci_solve(&h, &h, |_| true), Err(crate::Error::TooManyQubits { .. })));
}

#[test]
fn variational_bound() {
    let (p, a) = setup(0.735, 2.0, 0.2, EncodingPlan::default());
    let fci = fci_for(&p).unwrap().energy;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    use rand::Rng;
    for _ in 0..200 {
        let x: Vec<f64> = (0..a.n_params()).map(|_| rng.random_range(-3.2..3.2)).collect();
        let psi = a.circuit.statevector(&x).unwrap();
        let e = expectation(&p.hamiltonian, &DenseState::Statevector { n_qubits: p.n_qubits, amps: psi }).unwrap();
        assert!(e >= fci - 1e-9);
    }
}

#[test]
fn deterministic_under_seed() {
    let (p, a) = setup(0.735, 2.0, 0.1, EncodingPlan::default());
    let noise = NoiseModel::default();
    let r1 = vqe_minimize(&p, &a, &noise, &small_cfg()).unwrap();
    let r2 = vqe_minimize(&p, &a, &noise, &small_cfg()).unwrap();
    assert_eq!(r1, r2);
    let other = vqe_minimize(&p, &a, &noise, &VqeConfig { seed: 99, ..small_cfg() }).unwrap();
    assert_ne!(r1.energy.raw, other.energy.raw);
}

#[test]
fn rmse_is_recomputable() {
    let (p, a) = setup(0.735, 2.0, 0.1, EncodingPlan::default());
    let r = vqe_minimize(&p, &a, &NoiseModel::default(), &small_cfg()).unwrap();
    assert_eq!(r.repeats.len(), 3);
    for (k, st) in Stage::ALL.into_iter().enumerate() {
        let v: Vec<f64> = r.repeats.iter().map(|x| x.energy.values.get(st).unwrap()).collect();
        let m = v.iter().sum::<f64>() / 3.0;
        let rmse = (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / 3.0).sqrt();
        assert!((r.energy.get(st).unwrap() - m).abs() < 1e-14);
        assert!((r.energy.uncertainty.unwrap()[k] - rmse).abs() < 1e-14);
    }
}

#[test]
fn partial_stack_leaves_stages_empty() {
    let (p, a) = setup(0.735, 2.0, 0.1, EncodingPlan::default());
    let cfg = VqeConfig { mitigation: vec![Stage::Ro], ..small_cfg() };
    let r = vqe_minimize(&p, &a, &NoiseModel::default(), &cfg).unwrap();
    assert!(r.energy.raw.is_some() && r.energy.readout_corrected.is_some());
    assert!(r.energy.zne.is_none() && r.energy.rs.is_none() && r.energy.rzne.is_none());
    assert_eq!(cfg.objective_stage(), Stage::Ro);
}

#[test]
fn depolarizing_series_extrapolates_to_noiseless() {
    let (p, a) = setup(0.735, 2.0, 0.1, EncodingPlan::default());
    let x = [0.01, -0.11];
    let p2 = 0.01;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let factors = [1, 3, 5, 51, 101, 201];
    let est = Estimator::new(&a.circuit, &NoiseModel::depolarizing_only(p2), &factors, ShotMode::Exact, &mut rng).unwrap();
    let plan = crate::sim::MeasurementPlan::new(&p.hamiltonian).unwrap();
    let vals: Vec<f64> = est.series(&x, &[&plan], &mut rng).unwrap()[0].iter().map(|r| r.corrected).collect();
    let s = ZneSeries::fit(&factors, &vals).unwrap();
    let psi = a.circuit.statevector(&x).unwrap();
    let exact = expectation(&p.hamiltonian, &DenseState::Statevector { n_qubits: 2, amps: psi }).unwrap();
    assert!((zne_extrapolate(&s) - exact).abs() < 1e-3);
    let g = -(a.circuit.resources().cnots as f64) * (1.0 - p2).ln();
    assert!(((s.fit.g - g) / g).abs() < 0.05);
}

#[test]
fn photon_number_of_reference_is_zero() {
    let (p, a) = setup(0.735, 20.0, 0.1, EncodingPlan::default());
    let zeros = vec![0.0; a.n_params()];
    let v = measure_photon_number(&p, &a, &zeros, &NoiseModel::ideal(), &VqeConfig::exact(), 0).unwrap();
    assert!(v.values.raw.unwrap().abs() < 1e-12);
    let reference = DenseState::basis(p.n_qubits, p.initial_bits());
    assert_eq!(expectation(&p.photon_number, &reference).unwrap(), 0.0);
}

#[test]
fn equilibrium_is_a_parabola_vertex() {
    let cav = CavityParams::from_ev(2.0, [0.0; 3], 1).unwrap();
    let eq = fci_equilibrium(&cav, 0.65, 0.80, 0.005).unwrap();
    for d in [-0.01, 0.01] {
        assert!(fci_energy(eq.r_angstrom + d, &cav).unwrap().energy > eq.energy);
    }
    assert!(fci_equilibrium(&cav, 0.40, 0.60, 0.005).is_err());
}

#[test]
fn csv_header_and_rows() {
    let cav = CavityParams::from_ev(2.0, [0.1, 0.0, 0.0], 1).unwrap();
    let pts = scan_dissociation(&[0.735], cav, EncodingPlan::default(), &NoiseModel::ideal(), &VqeConfig::exact()).unwrap();
    let mut buf = Vec::new();
    write_scan_csv(&mut buf, &pts).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "R,lambda_x,E_fci,E_raw,E_ro,E_zne,E_rs,E_rzne,rmse_raw,rmse_ro,rmse_zne,rmse_rs,rmse_rzne,\
         n_fci,n_raw,n_ro,n_zne,n_rs,n_rzne,iterations_mean,iterations_std"
    );
    assert!(lines.next().unwrap().starts_with("0.735,0.1,"));
}

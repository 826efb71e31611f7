use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;

use cavity_vqe::chem::CavityParams;
use cavity_vqe::hamiltonian::EncodingPlan;
use cavity_vqe::mitigation::{correct_distribution, ReadoutCalibration};
use cavity_vqe::pauli::{expectation, to_dense_matrix, PauliString, PauliSum};
use cavity_vqe::sim::{apply_confusion, evolve, symmetric_flip, NoiseModel};
use cavity_vqe::vqe::PointSetup;

fn label(n: usize) -> impl Strategy<Value = String> {
    proptest::collection::vec(prop_oneof![Just('I'), Just('X'), Just('Y'), Just('Z')], n)
        .prop_map(|v| v.into_iter().collect())
}

fn dense(p: &PauliString) -> nalgebra::DMatrix<Complex64> {
    to_dense_matrix(&PauliSum::from_string(Complex64::new(1.0, 0.0), p)).unwrap()
}

fn tapered() -> PointSetup {
    let cav = CavityParams::from_ev(2.0, [0.1, 0.0, 0.0], 1).unwrap();
    PointSetup::new(0.9, cav, EncodingPlan::default()).unwrap()
}

proptest! {
    #[test]
    fn product_matches_matrix_product(a in label(3), b in label(3)) {
        let (pa, pb) = (PauliString::from_label(&a).unwrap(), PauliString::from_label(&b).unwrap());
        let diff = dense(&pa) * dense(&pb) - dense(&pa.multiply(&pb).unwrap());
        prop_assert!(diff.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn commutation_matches_matrices(a in label(3), b in label(3)) {
        let (pa, pb) = (PauliString::from_label(&a).unwrap(), PauliString::from_label(&b).unwrap());
        let (ma, mb) = (dense(&pa), dense(&pb));
        let comm = &ma * &mb - &mb * &ma;
        prop_assert_eq!(pa.commutes_with(&pb), comm.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn folding_keeps_the_unitary(t0 in -1.0f64..1.0, t1 in -1.0f64..1.0, m in prop_oneof![Just(3i64), Just(5), Just(7)]) {
        let c = tapered().ansatz.circuit;
        let a = c.statevector(&[t0, t1]).unwrap();
        let b = c.fold_cnots(m).unwrap().statevector(&[t0, t1]).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn noisy_evolution_is_trace_preserving(t0 in -1.0f64..1.0, t1 in -1.0f64..1.0, p2 in 0.0f64..0.2, gamma in 0.0f64..0.1) {
        let s = tapered();
        let noise = NoiseModel { p2, p1: p2 / 10.0, gamma_ad: gamma, ..NoiseModel::ideal() };
        let rho = evolve(&s.ansatz.circuit, &[t0, t1], &noise).unwrap();
        let one = PauliSum::identity(s.problem.n_qubits, 1.0);
        assert_relative_eq!(expectation(&one, &rho).unwrap(), 1.0, epsilon = 1e-12);
        let e = expectation(&s.problem.hamiltonian, &rho).unwrap();
        prop_assert!(e.is_finite());
    }

    #[test]
    fn readout_inverse_recovers_distribution(w in proptest::collection::vec(0.0f64..1.0, 4), f0 in 0.0f64..0.3, f1 in 0.0f64..0.3) {
        let total: f64 = w.iter().sum::<f64>() + 1e-9;
        let truth: Vec<f64> = w.iter().map(|x| x / total).collect();
        let noise = NoiseModel::ideal().with_readout(vec![symmetric_flip(f0), symmetric_flip(f1)]);
        let cal = ReadoutCalibration::exact(&noise, 2).unwrap();
        let fixed = correct_distribution(&apply_confusion(&truth, 2, &noise), &cal).unwrap();
        for (a, b) in fixed.quasi.iter().zip(&truth) {
            assert_relative_eq!(*a, *b, epsilon = 1e-10);
        }
    }
}

#[test]
fn depolarizing_pulls_reference_toward_mixed_energy() {
    let s = tapered();
    let exact = expectation(&s.problem.hamiltonian, &evolve(&s.ansatz.circuit, &[0.0, 0.0], &NoiseModel::ideal()).unwrap())
        .unwrap();
    let noisy = expectation(&s.problem.hamiltonian, &evolve(&s.ansatz.circuit, &[0.0, 0.0], &NoiseModel::depolarizing_only(0.05)).unwrap())
        .unwrap();
    let mixed = s.problem.hamiltonian.identity_coefficient().re;
    assert!(exact < noisy && noisy < mixed);
}

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::*;
use crate::chem::{compute_sto3g_h2, CavityParams, Geometry, IntegralSet};
use crate::hamiltonian::{encode_problem, EncodingPlan};
use crate::pauli::{to_dense_matrix, PauliString, PauliSum};

fn setup(plan: EncodingPlan) -> (IntegralSet, EncodedProblem) {
    let ints = compute_sto3g_h2(&Geometry::h2(0.735).unwrap()).unwrap();
    let cav = CavityParams::from_ev(2.0, [0.1, 0.0, 0.0], 1).unwrap();
    let p = encode_problem(&ints, &cav, plan).unwrap();
    (ints, p)
}

fn basis_vec(n: usize, bits: u64) -> DVector<Complex64> {
    let mut v = DVector::zeros(1 << n);
    v[bits as usize] = Complex64::new(1.0, 0.0);
    v
}

fn fidelity(a: &[Complex64], b: &DVector<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm_sqr()
}

/// Π_k Π_terms exp(θ_k c P) applied to the initial state, dense.
fn trotter_oracle(pool: &GeneratorPool, bits: u64, theta: &[f64]) -> DVector<Complex64> {
    let n = pool.n_qubits;
    let mut v = basis_vec(n, bits);
    for (k, e) in pool.entries.iter().enumerate() {
        for (c, p) in e.generator.iter() {
            let m = to_dense_matrix(&PauliSum::from_string(Complex64::new(1.0, 0.0), &p)).unwrap();
            let phi = theta[k] * c.im;
            let u = DMatrix::<Complex64>::identity(1 << n, 1 << n) * Complex64::new(phi.cos(), 0.0)
                + m * Complex64::new(0.0, phi.sin());
            v = u * v;
        }
    }
    v
}

#[test]
fn magic_basis_sends_antisymmetric_paulis_to_weight_one() {
    for l in ["YI", "IY", "XY", "YX", "ZY", "YZ"] {
        let q = conjugate_by_gates(&MAGIC_BASIS, &PauliString::from_label(l).unwrap()).unwrap();
        assert_eq!(q.weight(), 1, "{l} -> {q}");
        assert_eq!(q.phase() % 2, 0);
    }
}

#[test]
fn magic_basis_matches_dense_conjugation() {
    let mut c = Circuit::new(2, vec![]);
    c.extend(MAGIC_BASIS).unwrap();
    let cols: Vec<DVector<Complex64>> = (0..4)
        .map(|b| {
            let mut cb = Circuit::new(2, vec![]);
            for q in 0..2 {
                if b >> q & 1 == 1 {
                    cb.push(Gate::X(q)).unwrap();
                }
            }
            cb.extend(MAGIC_BASIS).unwrap();
            DVector::from_vec(cb.statevector(&[]).unwrap())
        })
        .collect();
    let m = DMatrix::from_columns(&cols);
    for l in ["YI", "XY", "YX", "ZY"] {
        let p = PauliString::from_label(l).unwrap();
        let q = conjugate_by_gates(&MAGIC_BASIS, &p).unwrap();
        let pm = to_dense_matrix(&PauliSum::from_string(Complex64::new(1.0, 0.0), &p)).unwrap();
        let qm = to_dense_matrix(&PauliSum::from_string(Complex64::new(1.0, 0.0), &q)).unwrap();
        let diff = (m.adjoint() * pm * &m - qm).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12, "{l}");
    }
}

#[test]
fn tapered_ansatz_has_two_cnots() {
    for flip in [false, true] {
        let (ints, p) = setup(EncodingPlan::bk_tapered().with_sign_flip(flip));
        let a = Ansatz::build(&ints, &p).unwrap();
        let r = a.circuit.resources();
        assert_eq!((r.qubits, r.cnots, r.params), (2, 2, 2));
        let mut classes: Vec<ExcitationClass> = a.pool.entries.iter().map(|e| e.class).collect();
        classes.dedup();
        assert_eq!(classes, vec![ExcitationClass::MixedSingle, ExcitationClass::ElectronicDouble]);
        let x_gates = a.circuit.gates().iter().filter(|g| matches!(g, Gate::X(_))).count();
        assert_eq!(x_gates, if flip { 0 } else { 2 });
    }
}

#[test]
fn jw_pool_has_five_classes() {
    let (ints, p) = setup(EncodingPlan::jw());
    let a = Ansatz::build(&ints, &p).unwrap();
    assert_eq!(a.pool.len(), 5);
    assert!(a.pool.entries.iter().all(|e| e.generator.is_anti_hermitian(1e-14)));
    assert_eq!(a.circuit.n_qubits(), 5);
    let bk = Ansatz::build(&ints, &setup(EncodingPlan::bk()).1).unwrap();
    assert_eq!(bk.circuit.n_qubits(), 3);
}

#[test]
fn circuits_match_dense_products() {
    let theta = [0.31, -0.7, 0.12, 0.45, -0.2];
    for plan in [EncodingPlan::jw(), EncodingPlan::bk(), EncodingPlan::bk_tapered(), EncodingPlan::default()] {
        let (ints, p) = setup(plan);
        let a = Ansatz::build(&ints, &p).unwrap();
        let th = &theta[..a.n_params()];
        let psi = a.circuit.statevector(th).unwrap();
        let want = trotter_oracle(&a.pool, p.initial_bits(), th);
        assert!(fidelity(&psi, &want) > 1.0 - 1e-10, "{}", plan.label());
    }
}

#[test]
fn commuting_generators_equal_their_exponentials() {
    let (ints, p) = setup(EncodingPlan::jw());
    let a = Ansatz::build(&ints, &p).unwrap();
    let mut checked = 0;
    for (k, e) in a.pool.entries.iter().enumerate() {
        let terms: Vec<PauliString> = e.generator.iter().map(|(_, t)| t).collect();
        if !terms.iter().all(|x| terms.iter().all(|y| x.commutes_with(y))) {
            continue;
        }
        let single = GeneratorPool { n_qubits: a.pool.n_qubits, entries: vec![e.clone()], dropped: vec![] };
        let theta = 0.3 + 0.1 * k as f64;
        let psi = synthesize(&single, p.initial_bits()).unwrap().statevector(&[theta]).unwrap();
        let g = to_dense_matrix(&e.generator).unwrap() * Complex64::new(theta, 0.0);
        let want = g.exp() * basis_vec(p.n_qubits, p.initial_bits());
        assert!(fidelity(&psi, &want) > 1.0 - 1e-10, "{}", e.label);
        checked += 1;
    }
    // electronic singles and doubles at least
    assert!(checked >= 2);
}

#[test]
fn zero_parameters_prepare_the_reference() {
    for plan in [EncodingPlan::jw(), EncodingPlan::bk_tapered(), EncodingPlan::default()] {
        let (ints, p) = setup(plan);
        let a = Ansatz::build(&ints, &p).unwrap();
        let psi = a.circuit.statevector(&vec![0.0; a.n_params()]).unwrap();
        assert!((psi[p.initial_bits() as usize].norm_sqr() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn folding_keeps_the_noiseless_state() {
    let (ints, p) = setup(EncodingPlan::default());
    let a = Ansatz::build(&ints, &p).unwrap();
    let th = [0.4, -0.1];
    let base = a.circuit.statevector(&th).unwrap();
    for m in [1, 3, 5, 51, 101, 201] {
        let f = a.circuit.fold_cnots(m).unwrap();
        assert_eq!(f.resources().cnots, 2 * m as usize);
        let psi = f.statevector(&th).unwrap();
        for (x, y) in psi.iter().zip(&base) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}

#[test]
fn synthesis_is_deterministic() {
    let (ints, p) = setup(EncodingPlan::jw());
    let a = Ansatz::build(&ints, &p).unwrap().circuit.dump();
    let b = Ansatz::build(&ints, &p).unwrap().circuit.dump();
    assert_eq!(a, b);
}

#[test]
fn staircase_for_zz() {
    let mut g = PauliSum::zero(2);
    g.add_term(Complex64::new(0.0, 0.5), &PauliString::from_label("ZZ").unwrap());
    let pool = GeneratorPool {
        n_qubits: 2,
        entries: vec![PoolEntry { label: "zz".into(), class: ExcitationClass::ElectronicDouble, generator: g }],
        dropped: vec![],
    };
    let c = synthesize(&pool, 0).unwrap();
    assert_eq!(c.dump(), "CNOT 0,1\nRZ 1 -1.0*theta0\nCNOT 0,1\n");
}

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::*;
use crate::chem::units::EV_PER_HARTREE;
use crate::chem::{compute_sto3g_h2, qed_hf_reference, CavityParams, Geometry, IntegralSet};
use crate::pauli::{expectation, to_dense_matrix, DenseState, PauliString, PauliSum};

fn h2(r: f64) -> IntegralSet {
    compute_sto3g_h2(&Geometry::h2(r).unwrap()).unwrap()
}

fn cavity(omega_ev: f64, lx: f64) -> CavityParams {
    CavityParams::from_ev(omega_ev, [lx, 0.0, 0.0], 1).unwrap()
}

fn sector_spectrum(p: &EncodedProblem) -> Vec<f64> {
    let m = to_dense_matrix(&p.hamiltonian).unwrap();
    let idx: Vec<usize> = (0..1usize << p.n_qubits).filter(|&b| p.in_sector(b as u64)).collect();
    let sub = DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])]);
    let mut ev: Vec<f64> = sub.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

#[test]
fn fci_energy_at_two_ev() {
    let p = encode_problem(&h2(0.735), &cavity(2.0, 0.1), EncodingPlan::jw()).unwrap();
    let e = sector_spectrum(&p)[0];
    assert!((e - -1.1295).abs() < 5e-4, "E = {e}");
}

#[test]
fn qubit_counts() {
    let ints = h2(0.735);
    let cav = cavity(2.0, 0.1);
    let n = |plan| encode_problem(&ints, &cav, plan).unwrap().n_qubits;
    assert_eq!(n(EncodingPlan::jw()), 5);
    assert_eq!(n(EncodingPlan::bk()), 3);
    assert_eq!(n(EncodingPlan::bk_tapered()), 2);
}

#[test]
fn encodings_share_the_ground_energy() {
    let ints = h2(0.9);
    let cav = cavity(2.0, 0.1);
    let unary = |plan: EncodingPlan| plan.with_bosons(BosonEncoding::Unary);
    let plans = [
        EncodingPlan::jw(),
        EncodingPlan::bk(),
        EncodingPlan::bk_tapered(),
        EncodingPlan::bk_tapered().with_sign_flip(true),
        EncodingPlan { taper_parity: true, ..EncodingPlan::jw() },
        unary(EncodingPlan::jw()),
        unary(EncodingPlan::bk_tapered()),
    ];
    let e0 = sector_spectrum(&encode_problem(&ints, &cav, plans[0]).unwrap())[0];
    for plan in plans {
        let e = sector_spectrum(&encode_problem(&ints, &cav, plan).unwrap())[0];
        assert!((e - e0).abs() < 1e-9, "{}: {e} vs {e0}", plan.label());
    }
}

#[test]
fn jw_and_bk_full_spectra_agree() {
    let ints = h2(0.735);
    let op = build_pauli_fierz(&ints, &cavity(2.0, 0.1)).unwrap();
    let spectrum = |m: FermionMapped| {
        let h = encode_bosons(&m, BosonEncoding::SingleQubit, 1).unwrap();
        let mut ev: Vec<f64> = to_dense_matrix(&h).unwrap().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    };
    let a = spectrum(map_fermions_jw(&op).unwrap());
    let b = spectrum(map_fermions_bk(&op).unwrap());
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-10);
    }
}

#[test]
fn hamiltonian_is_hermitian() {
    for plan in [EncodingPlan::jw(), EncodingPlan::bk_tapered()] {
        let p = encode_problem(&h2(1.2), &cavity(2.0, 0.2), plan).unwrap();
        assert!(p.hamiltonian.max_imag() < 1e-14);
        let m = to_dense_matrix(&p.hamiltonian).unwrap();
        let dev = (&m - m.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(dev < 1e-12);
    }
}

#[test]
fn parity_commutes_termwise() {
    for lx in [0.0, 0.05, 0.2] {
        let ints = h2(0.735);
        let cav = cavity(2.0, lx);
        let op = build_pauli_fierz(&ints, &cav).unwrap();
        let enc = LinearEncoding::jordan_wigner(4);
        let h = encode_bosons(&map_fermions(&op, &enc).unwrap(), BosonEncoding::SingleQubit, 1).unwrap();
        let odd = electron_parity_modes(&ints).unwrap();
        assert_eq!(odd, 0b1010);
        let p = PauliString::from_masks(5, 0, enc.parity_mask(odd) | 1 << 4).unwrap();
        assert!(h.commutes_termwise(&p));
    }
}

#[test]
fn uncoupled_operator_has_no_cross_terms() {
    let ints = h2(0.735);
    let op = build_pauli_fierz(&ints, &cavity(2.0, 0.0)).unwrap();
    for t in op.terms() {
        if !t.bosons.is_empty() {
            assert!(t.fermions.is_empty());
            assert_eq!(t.bosons, vec![Ladder::Create, Ladder::Annihilate]);
        }
    }
    assert!((op.constant() - ints.e_nuc).abs() < 1e-15);
    let h = encode_problem(&ints, &cavity(2.0, 0.0), EncodingPlan::jw()).unwrap().hamiltonian;
    let omega = 2.0 / EV_PER_HARTREE;
    // photon qubit carries only ω(I − Z)/2
    for (c, p) in h.iter() {
        if p.support() >> 4 & 1 == 1 {
            assert_eq!(p.support(), 1 << 4);
            assert!((c.re + 0.5 * omega).abs() < 1e-15);
        }
    }
}

#[test]
fn reference_expectation_is_qed_hf_energy() {
    let ints = h2(0.735);
    let cav = cavity(2.0, 0.1);
    let want = qed_hf_reference(&ints, &cav).energy;
    for plan in [EncodingPlan::jw(), EncodingPlan::bk(), EncodingPlan::bk_tapered(), EncodingPlan::default()] {
        let p = encode_problem(&ints, &cav, plan).unwrap();
        let s = DenseState::basis(p.n_qubits, p.initial_bits());
        let e = expectation(&p.hamiltonian, &s).unwrap();
        assert!((e - want).abs() < 1e-12, "{}: {e} vs {want}", plan.label());
        assert!(expectation(&p.photon_number, &s).unwrap().abs() < 1e-15);
    }
}

#[test]
fn tapered_photon_number_is_zz_form() {
    let p = encode_problem(&h2(0.735), &cavity(20.0, 0.1), EncodingPlan::default()).unwrap();
    assert_eq!(p.photon_number, PauliSum::from_labels([(0.5, "II"), (-0.5, "ZZ")]).unwrap());
    assert_eq!(p.photon_surrogate(), PauliSum::from_labels([(1.0, "ZZ")]).unwrap());
}

#[test]
fn tapering_preserves_sector_spectrum() {
    let ints = h2(1.5);
    let cav = cavity(2.0, 0.1);
    let full = sector_spectrum(&encode_problem(&ints, &cav, EncodingPlan::bk()).unwrap());
    let tap = sector_spectrum(&encode_problem(&ints, &cav, EncodingPlan::bk_tapered()).unwrap());
    // the untapered sector also fixes P, so both hold the same states
    assert_eq!(full.len(), tap.len());
    for (a, b) in full.iter().zip(&tap) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn uncoupled_problem_also_tapers() {
    let p = encode_problem(&h2(0.735), &cavity(2.0, 0.0), EncodingPlan::bk_tapered()).unwrap();
    assert_eq!(p.n_qubits, 2);
}

#[test]
fn photon_number_spectrum() {
    for (plan, cutoff) in [(EncodingPlan::jw(), 1), (EncodingPlan::jw().with_bosons(BosonEncoding::Unary), 2)] {
        let cav = CavityParams::from_ev(2.0, [0.1, 0.0, 0.0], cutoff).unwrap();
        let p = encode_problem(&h2(0.735), &cav, plan).unwrap();
        let m = to_dense_matrix(&p.photon_number).unwrap();
        let one_hot: Vec<&SectorConstraint> = p.sectors.iter().filter(|s| s.name == "photon_one_hot").collect();
        let mut seen: Vec<f64> = (0..1usize << p.n_qubits)
            .filter(|&b| one_hot.iter().all(|s| (diagonal_value(&s.operator, b as u64).re - s.value).abs() < 1e-9))
            .map(|b| m[(b, b)].re)
            .collect();
        seen.sort_by(f64::total_cmp);
        seen.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let want: Vec<f64> = (0..=cutoff).map(|k| k as f64).collect();
        assert_eq!(seen, want);
    }
}

#[test]
fn creation_under_jw_in_full_register() {
    let mut op = MixedOperator::new(4);
    op.push(1.0, &[(0, Ladder::Create)], &[]).unwrap();
    let m = map_fermions_jw(&op).unwrap();
    let s = &m.parts[&Vec::new()];
    assert_eq!(s.coefficient(&PauliString::from_label("XIII").unwrap()), Complex64::new(0.5, 0.0));
    assert_eq!(s.coefficient(&PauliString::from_label("YIII").unwrap()), Complex64::new(0.0, -0.5));
    assert_eq!(s.len(), 2);
}

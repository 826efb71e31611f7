//! The coherent-state Pauli-Fierz Hamiltonian and its qubit encodings.
//!
//! Fermions go through a linear encoding (Jordan-Wigner or Bravyi-Kitaev),
//! the photon mode through a single-qubit or unary register, and the result
//! can be tapered along Z2 symmetries and sign-flipped so that the all-zero
//! state is the reference.

mod boson;
mod encoding;
mod fermion;
mod mixed;
mod pauli_fierz;
mod taper;

pub use boson::{encode_bosons, BosonEncoding};
pub use encoding::{
    electron_parity_modes, encode_problem, encode_with, EncodedProblem, EncodingPlan, SectorConstraint,
    DIPOLE_ZERO_TOL,
};
pub use fermion::{map_fermions, map_fermions_bk, map_fermions_jw, FermionMapped, FermionMapping, LinearEncoding};
pub use mixed::{Ladder, MixedOperator, MixedTerm};
pub use pauli_fierz::{
    build_pauli_fierz, fermion_number_operator, photon_number_operator, reference_occupation, spin_orbital,
};
pub use taper::{diagonal_value, flip_reference_signs, Z2Taper, SYMMETRY_TOL};

#[cfg(test)]
mod tests;

//! Molecular integrals, restricted Hartree-Fock and the QED-HF reference.

pub mod basis;
mod integrals;
mod io;
mod scf;
pub mod units;

pub use integrals::{
    compute_sto3g_h2, compute_sto3g_h2_with, qed_hf_reference, Atom, CavityParams, Geometry, IntegralSet,
    QedHfReference,
};
pub use io::{integrals_to_string, load_integrals, parse_integrals, save_integrals};
pub use scf::{restricted_hf, ScfOptions, ScfResult};

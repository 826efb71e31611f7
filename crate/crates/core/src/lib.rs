//! Polaritonic ground states of cavity-coupled molecules on an emulated
//! noisy quantum device.
//!
//! The pipeline runs from molecular integrals ([`chem`]) through the
//! coherent-state Pauli-Fierz Hamiltonian and its qubit encodings
//! ([`hamiltonian`]), the polaritonic UCC ansatz ([`circuit`]), a
//! density-matrix noise simulator ([`sim`]) and a composite error-mitigation
//! stack ([`mitigation`]) to the VQE driver and its exact-diagonalization
//! baseline ([`vqe`]).

pub mod chem;
pub mod circuit;
pub mod error;
pub mod hamiltonian;
pub mod mitigation;
pub mod pauli;
pub mod sim;
pub mod vqe;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/pauli.md")]
    mod pauli {}
    #[doc = include_str!("../../../book/src/hamiltonian.md")]
    mod hamiltonian {}
    #[doc = include_str!("../../../book/src/encodings.md")]
    mod encodings {}
    #[doc = include_str!("../../../book/src/ansatz.md")]
    mod ansatz {}
    #[doc = include_str!("../../../book/src/noise.md")]
    mod noise {}
    #[doc = include_str!("../../../book/src/mitigation.md")]
    mod mitigation {}
    #[doc = include_str!("../../../book/src/vqe.md")]
    mod vqe {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

//! Pauli strings, Pauli sums and exact expectation values.
//!
//! Strings use a symplectic `(x, z)` bitmask representation with an
//! explicit power-of-`i` phase. Sums key on phase-free masks.

mod state;
mod string;
mod sum;

pub use state::{apply_sum, expectation, to_dense_matrix, DenseState, DENSE_LIMIT, IMAG_RESIDUE_TOL};
pub use string::{i_pow, Pauli, PauliString, MAX_QUBITS};
pub use sum::{PauliSum, DEFAULT_DROP_TOL};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::EncodedProblem;
use crate::pauli::{expectation, to_dense_matrix, DenseState, PauliSum};

/// Largest register [`fci_solve`] diagonalizes.
pub const FCI_LIMIT: usize = 12;

/// Lowest eigenpair within a sector.
#[derive(Debug, Clone, PartialEq)]
pub struct FciSolution {
    pub energy: f64,
    /// Amplitudes over the full register, zero outside the sector.
    pub vector: Vec<Complex64>,
    pub photon_number: f64,
    /// `‖Hv − Ev‖`.
    pub residual: f64,
}

/// Dense diagonalization of `h` restricted to the basis states accepted by
/// `in_sector`; `⟨v|number_op|v⟩` is evaluated on the ground vector.
pub fn fci_solve(h: &PauliSum, number_op: &PauliSum, in_sector: impl Fn(u64) -> bool) -> Result<FciSolution> {
    let n = h.n_qubits();
    if n > FCI_LIMIT {
        return Err(Error::TooManyQubits { n, limit: FCI_LIMIT });
    }
    if number_op.n_qubits() != n {
        return Err(Error::SizeMismatch(n, number_op.n_qubits()));
    }
    let full = to_dense_matrix(h)?;
    let idx: Vec<usize> = (0..1usize << n).filter(|&b| in_sector(b as u64)).collect();
    if idx.is_empty() {
        return Err(Error::InvalidInput("empty symmetry sector".into()));
    }
    let sub = DMatrix::from_fn(idx.len(), idx.len(), |i, j| full[(idx[i], idx[j])]);
    let eig = sub.clone().symmetric_eigen();
    let (k, &energy) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty sector");
    let v: DVector<Complex64> = eig.eigenvectors.column(k).into_owned();
    let residual = (&sub * &v - v.map(|c| c * energy)).norm();
    let mut vector = vec![Complex64::new(0.0, 0.0); 1 << n];
    for (i, &b) in idx.iter().enumerate() {
        vector[b] = v[i];
    }
    let photon_number = expectation(number_op, &DenseState::Statevector { n_qubits: n, amps: vector.clone() })?;
    Ok(FciSolution { energy, vector, photon_number, residual })
}

/// [`fci_solve`] on an encoded problem in its physical sector.
pub fn fci_for(problem: &EncodedProblem) -> Result<FciSolution> {
    fci_solve(&problem.hamiltonian, &problem.photon_number, |b| problem.in_sector(b))
}

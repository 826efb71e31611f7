//! Restricted closed-shell Hartree-Fock.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct ScfOptions {
    pub max_cycles: usize,
    pub energy_tol: f64,
    pub density_rms_tol: f64,
}

impl Default for ScfOptions {
    fn default() -> Self {
        Self { max_cycles: 200, energy_tol: 1e-10, density_rms_tol: 1e-8 }
    }
}

#[derive(Debug, Clone)]
pub struct ScfResult {
    /// Total energy including nuclear repulsion.
    pub energy: f64,
    /// AO × MO coefficients, columns ordered by orbital energy.
    pub coefficients: DMatrix<f64>,
    pub orbital_energies: DVector<f64>,
    /// AO density matrix (2 × occupied projector).
    pub density: DMatrix<f64>,
    pub n_occupied: usize,
    pub iterations: usize,
    pub energy_history: Vec<f64>,
    /// ‖FPS − SPF‖ at convergence.
    pub gradient_norm: f64,
}

fn fock(h: &DMatrix<f64>, g: &[f64], p: &DMatrix<f64>) -> DMatrix<f64> {
    let n = h.nrows();
    let mut f = h.clone();
    for mu in 0..n {
        for nu in 0..n {
            let mut v = 0.0;
            for la in 0..n {
                for si in 0..n {
                    let j = g[((mu * n + nu) * n + la) * n + si];
                    let k = g[((mu * n + la) * n + nu) * n + si];
                    v += p[(la, si)] * (j - 0.5 * k);
                }
            }
            f[(mu, nu)] += v;
        }
    }
    f
}

/// Fix the sign of each orbital so its largest-magnitude coefficient is positive.
fn canonical_signs(c: &mut DMatrix<f64>) {
    for j in 0..c.ncols() {
        let mut best = 0;
        for i in 0..c.nrows() {
            if c[(i, j)].abs() > c[(best, j)].abs() + 1e-10 {
                best = i;
            }
        }
        if c[(best, j)] < 0.0 {
            c.column_mut(j).neg_mut();
        }
    }
}

fn sorted_eigen(m: DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
    let vecs = DMatrix::from_columns(&order.iter().map(|&i| eig.eigenvectors.column(i)).collect::<Vec<_>>());
    (vals, vecs)
}

/// Core-Hamiltonian guess, symmetric orthogonalization, plain Roothaan
/// iterations (no damping or extrapolation).
pub fn restricted_hf(
    s: &DMatrix<f64>,
    h: &DMatrix<f64>,
    g: &[f64],
    n_occupied: usize,
    e_nuc: f64,
    opts: &ScfOptions,
) -> Result<ScfResult> {
    let n = s.nrows();
    if n_occupied > n {
        return Err(Error::InvalidInput("more occupied orbitals than basis functions".into()));
    }
    let (sv, su) = sorted_eigen(s.clone());
    if sv[0] < 1e-10 {
        return Err(Error::InvalidInput("overlap matrix is singular".into()));
    }
    let x = &su * DMatrix::from_diagonal(&sv.map(|v| v.powf(-0.5))) * su.transpose();

    let solve = |f: &DMatrix<f64>| {
        let fp = x.transpose() * f * &x;
        let (e, cp) = sorted_eigen((&fp + fp.transpose()) * 0.5);
        let mut c = &x * cp;
        canonical_signs(&mut c);
        (e, c)
    };
    let density = |c: &DMatrix<f64>| {
        let occ = c.columns(0, n_occupied);
        occ * occ.transpose() * 2.0
    };
    let energy = |p: &DMatrix<f64>, f: &DMatrix<f64>| 0.5 * p.component_mul(&(h + f)).sum() + e_nuc;

    let (_, mut c) = solve(h);
    let mut eps;
    let mut p = density(&c);
    let mut history = Vec::new();
    let mut e_old = f64::NAN;
    for it in 1..=opts.max_cycles {
        let f = fock(h, g, &p);
        let e = energy(&p, &f);
        history.push(e);
        let (eps_new, c_new) = solve(&f);
        let p_new = density(&c_new);
        let rms = ((&p_new - &p).norm_squared() / (n * n) as f64).sqrt();
        eps = eps_new;
        c = c_new;
        p = p_new;
        if (e - e_old).abs() < opts.energy_tol && rms < opts.density_rms_tol {
            let f = fock(h, g, &p);
            let grad = (&f * &p * s - s * &p * &f).norm();
            return Ok(ScfResult {
                energy: energy(&p, &f),
                coefficients: c,
                orbital_energies: eps,
                density: p,
                n_occupied,
                iterations: it,
                energy_history: history,
                gradient_norm: grad,
            });
        }
        e_old = e;
    }
    Err(Error::ScfNotConverged(opts.max_cycles))
}

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::basis::{self, SShell, Vec3};
use super::scf::{restricted_hf, ScfOptions};
use super::units;
use crate::error::{Error, Result};

/// Nuclear framework; positions in Bohr.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub atoms: Vec<Atom>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub charge: u32,
    pub position: Vec3,
}

impl Geometry {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidInput("geometry has no atoms".into()));
        }
        if atoms.iter().any(|a| a.position.iter().any(|x| !x.is_finite())) {
            return Err(Error::InvalidInput("non-finite atomic position".into()));
        }
        Ok(Self { atoms })
    }

    /// H₂ centered at the origin with the bond along x.
    pub fn h2(bond_angstrom: f64) -> Result<Self> {
        if !(bond_angstrom > 0.0) || !bond_angstrom.is_finite() {
            return Err(Error::InvalidInput(format!("bond length must be positive, got {bond_angstrom}")));
        }
        let half = units::angstrom_to_bohr(bond_angstrom) / 2.0;
        Self::new(vec![
            Atom { charge: 1, position: [-half, 0.0, 0.0] },
            Atom { charge: 1, position: [half, 0.0, 0.0] },
        ])
    }

    pub fn nuclear_repulsion(&self) -> f64 {
        let mut e = 0.0;
        for (i, a) in self.atoms.iter().enumerate() {
            for b in &self.atoms[i + 1..] {
                let r: f64 = (0..3).map(|k| (a.position[k] - b.position[k]).powi(2)).sum::<f64>().sqrt();
                e += (a.charge * b.charge) as f64 / r;
            }
        }
        e
    }

    pub fn nuclear_dipole(&self) -> Vec3 {
        std::array::from_fn(|k| self.atoms.iter().map(|a| a.charge as f64 * a.position[k]).sum())
    }
}

/// Electronic integrals in the molecular-orbital basis.
///
/// `dip[k]` holds position moments `<p|r_k|q>`; the electronic dipole
/// operator is `-Σ dip[k]_pq E_pq`. `second`, when present, holds
/// `<p|r_k r_l|q>` for (xx, yy, zz, xy, xz, yz) and supplies the one-electron
/// part of the dipole self-energy.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralSet {
    pub n_spatial: usize,
    pub h: DMatrix<f64>,
    /// Chemists' order `(pq|rs)` flattened as `((p·n + q)·n + r)·n + s`.
    pub g: Vec<f64>,
    pub dip: [DMatrix<f64>; 3],
    pub second: Option<[DMatrix<f64>; 6]>,
    pub e_nuc: f64,
    pub d_nuc: Vec3,
    pub mo_energies: Vec<f64>,
    /// Doubly occupied spatial orbitals of the closed-shell reference.
    pub occupied: Vec<usize>,
}

/// Single-mode cavity in atomic units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityParams {
    pub omega: f64,
    pub lambda: Vec3,
    pub n_photon_max: usize,
}

impl CavityParams {
    pub fn new(omega: f64, lambda: Vec3, n_photon_max: usize) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidInput(format!("cavity frequency must be positive, got {omega}")));
        }
        if n_photon_max < 1 {
            return Err(Error::InvalidInput("photon cutoff must be at least 1".into()));
        }
        Ok(Self { omega, lambda, n_photon_max })
    }

    pub fn from_ev(omega_ev: f64, lambda: Vec3, n_photon_max: usize) -> Result<Self> {
        Self::new(units::ev_to_hartree(omega_ev), lambda, n_photon_max)
    }

    pub fn is_coupled(&self) -> bool {
        self.lambda.iter().any(|&l| l != 0.0)
    }
}

impl IntegralSet {
    #[inline]
    pub fn g_at(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let n = self.n_spatial;
        self.g[((p * n + q) * n + r) * n + s]
    }

    pub fn n_electrons(&self) -> usize {
        2 * self.occupied.len()
    }

    /// λ·dip as a spatial matrix.
    pub fn lambda_dipole(&self, lambda: &Vec3) -> DMatrix<f64> {
        let n = self.n_spatial;
        let mut m = DMatrix::zeros(n, n);
        for k in 0..3 {
            if lambda[k] != 0.0 {
                m += &self.dip[k] * lambda[k];
            }
        }
        m
    }

    /// λ_k λ_l <p|r_k r_l|q>; falls back to (λ·dip)² in the finite basis.
    pub fn lambda_second_moment(&self, lambda: &Vec3) -> DMatrix<f64> {
        match &self.second {
            Some(sec) => {
                let n = self.n_spatial;
                let mut m = DMatrix::zeros(n, n);
                for (i, &(k, l)) in basis::SECOND_MOMENT_PAIRS.iter().enumerate() {
                    let w = if k == l { lambda[k] * lambda[k] } else { 2.0 * lambda[k] * lambda[l] };
                    if w != 0.0 {
                        m += &sec[i] * w;
                    }
                }
                m
            }
            None => {
                let d = self.lambda_dipole(lambda);
                &d * &d
            }
        }
    }

    /// Closed-shell determinant energy (electronic + nuclear).
    pub fn reference_energy(&self) -> f64 {
        let mut e = self.e_nuc;
        for &i in &self.occupied {
            e += 2.0 * self.h[(i, i)];
            for &j in &self.occupied {
                e += 2.0 * self.g_at(i, i, j, j) - self.g_at(i, j, j, i);
            }
        }
        e
    }

    /// Total dipole of the reference determinant.
    pub fn reference_dipole(&self) -> Vec3 {
        std::array::from_fn(|k| {
            self.d_nuc[k] - 2.0 * self.occupied.iter().map(|&i| self.dip[k][(i, i)]).sum::<f64>()
        })
    }

    /// Check symmetry invariants; returns the largest violation found.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let n = self.n_spatial;
        let sym = |m: &DMatrix<f64>| (m - m.transpose()).amax();
        if self.h.nrows() != n || self.h.ncols() != n {
            return Err(Error::InvalidInput("h has wrong shape".into()));
        }
        if self.g.len() != n.pow(4) {
            return Err(Error::InvalidInput("g has wrong length".into()));
        }
        let v = sym(&self.h);
        if v > tol {
            return Err(Error::InvalidInput(format!("h is not symmetric (max deviation {v:.3e})")));
        }
        for (k, d) in self.dip.iter().enumerate() {
            let v = sym(d);
            if v > tol {
                return Err(Error::InvalidInput(format!("dipole {k} is not symmetric ({v:.3e})")));
            }
        }
        if let Some(sec) = &self.second {
            for m in sec {
                if sym(m) > tol {
                    return Err(Error::InvalidInput("second moment is not symmetric".into()));
                }
            }
        }
        let worst = eightfold_violation(self);
        if worst > tol {
            return Err(Error::InvalidInput(format!(
                "two-electron tensor breaks 8-fold symmetry ({worst:.3e})"
            )));
        }
        if self.occupied.iter().any(|&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: *self.occupied.iter().max().unwrap(), len: n });
        }
        Ok(())
    }
}

pub(crate) fn eightfold_violation(ints: &IntegralSet) -> f64 {
    let n = ints.n_spatial;
    let mut worst: f64 = 0.0;
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let v = ints.g_at(p, q, r, s);
                    for w in [
                        ints.g_at(q, p, r, s),
                        ints.g_at(p, q, s, r),
                        ints.g_at(q, p, s, r),
                        ints.g_at(r, s, p, q),
                        ints.g_at(s, r, p, q),
                        ints.g_at(r, s, q, p),
                        ints.g_at(s, r, q, p),
                    ] {
                        worst = worst.max((v - w).abs());
                    }
                }
            }
        }
    }
    worst
}

/// AO-basis integrals over s shells.
pub(crate) struct AoIntegrals {
    pub s: DMatrix<f64>,
    pub h: DMatrix<f64>,
    pub g: Vec<f64>,
    pub dip: [DMatrix<f64>; 3],
    pub second: [DMatrix<f64>; 6],
}

pub(crate) fn ao_integrals(shells: &[SShell], geom: &Geometry) -> AoIntegrals {
    let n = shells.len();
    let mut s = DMatrix::zeros(n, n);
    let mut h = DMatrix::zeros(n, n);
    let mut dip: [DMatrix<f64>; 3] = std::array::from_fn(|_| DMatrix::zeros(n, n));
    let mut second: [DMatrix<f64>; 6] = std::array::from_fn(|_| DMatrix::zeros(n, n));
    for i in 0..n {
        for j in 0..n {
            let o = basis::one_electron(&shells[i], &shells[j]);
            s[(i, j)] = o.overlap;
            let v: f64 = geom
                .atoms
                .iter()
                .map(|a| basis::nuclear_attraction(&shells[i], &shells[j], a.charge as f64, &a.position))
                .sum();
            h[(i, j)] = o.kinetic + v;
            for k in 0..3 {
                dip[k][(i, j)] = o.dipole[k];
            }
            for k in 0..6 {
                second[k][(i, j)] = o.second[k];
            }
        }
    }
    let mut g = vec![0.0; n.pow(4)];
    // unique quartets only, then scatter to all 8 images
    for p in 0..n {
        for q in 0..=p {
            for r in 0..n {
                for t in 0..=r {
                    if p * (p + 1) / 2 + q < r * (r + 1) / 2 + t {
                        continue;
                    }
                    let v = basis::electron_repulsion(&shells[p], &shells[q], &shells[r], &shells[t]);
                    for (a, b, c, d) in [
                        (p, q, r, t),
                        (q, p, r, t),
                        (p, q, t, r),
                        (q, p, t, r),
                        (r, t, p, q),
                        (t, r, p, q),
                        (r, t, q, p),
                        (t, r, q, p),
                    ] {
                        g[((a * n + b) * n + c) * n + d] = v;
                    }
                }
            }
        }
    }
    AoIntegrals { s, h, g, dip, second }
}

/// Transform a four-index chemists' tensor with MO coefficients `c` (AO × MO).
pub(crate) fn transform_eri(g: &[f64], c: &DMatrix<f64>) -> Vec<f64> {
    let n = c.nrows();
    let m = c.ncols();
    let idx = |a: usize, b: usize, cc: usize, d: usize, dim: [usize; 4]| {
        ((a * dim[1] + b) * dim[2] + cc) * dim[3] + d
    };
    // quarter transforms, one index at a time
    let mut t1 = vec![0.0; m * n * n * n];
    for p in 0..m {
        for mu in 0..n {
            let cp = c[(mu, p)];
            if cp == 0.0 {
                continue;
            }
            for nu in 0..n {
                for la in 0..n {
                    for si in 0..n {
                        t1[idx(p, nu, la, si, [m, n, n, n])] += cp * g[idx(mu, nu, la, si, [n; 4])];
                    }
                }
            }
        }
    }
    let mut t2 = vec![0.0; m * m * n * n];
    for p in 0..m {
        for q in 0..m {
            for nu in 0..n {
                let cq = c[(nu, q)];
                for la in 0..n {
                    for si in 0..n {
                        t2[idx(p, q, la, si, [m, m, n, n])] += cq * t1[idx(p, nu, la, si, [m, n, n, n])];
                    }
                }
            }
        }
    }
    let mut t3 = vec![0.0; m * m * m * n];
    for p in 0..m {
        for q in 0..m {
            for r in 0..m {
                for la in 0..n {
                    let cr = c[(la, r)];
                    for si in 0..n {
                        t3[idx(p, q, r, si, [m, m, m, n])] += cr * t2[idx(p, q, la, si, [m, m, n, n])];
                    }
                }
            }
        }
    }
    let mut t4 = vec![0.0; m.pow(4)];
    for p in 0..m {
        for q in 0..m {
            for r in 0..m {
                for s in 0..m {
                    let mut v = 0.0;
                    for si in 0..n {
                        v += c[(si, s)] * t3[idx(p, q, r, si, [m, m, m, n])];
                    }
                    t4[idx(p, q, r, s, [m; 4])] = v;
                }
            }
        }
    }
    symmetrize_eightfold(&mut t4, m);
    t4
}

/// Copy each canonical quartet (p≥q, r≥s, pq≥rs) onto its seven images.
fn symmetrize_eightfold(g: &mut [f64], m: usize) {
    let at = |p: usize, q: usize, r: usize, s: usize| ((p * m + q) * m + r) * m + s;
    for p in 0..m {
        for q in 0..=p {
            for r in 0..m {
                for s in 0..=r {
                    if p * (p + 1) / 2 + q < r * (r + 1) / 2 + s {
                        continue;
                    }
                    let v = g[at(p, q, r, s)];
                    for (a, b, c, d) in
                        [(p, q, r, s), (q, p, r, s), (p, q, s, r), (q, p, s, r), (r, s, p, q), (s, r, p, q), (r, s, q, p), (s, r, q, p)]
                    {
                        g[at(a, b, c, d)] = v;
                    }
                }
            }
        }
    }
}

/// Built-in STO-3G engine for two-electron homo- or heteronuclear hydrogen
/// diatomics: AO integrals, restricted HF, MO transformation.
pub fn compute_sto3g_h2(geometry: &Geometry) -> Result<IntegralSet> {
    compute_sto3g_h2_with(geometry, &ScfOptions::default())
}

pub fn compute_sto3g_h2_with(geometry: &Geometry, opts: &ScfOptions) -> Result<IntegralSet> {
    if geometry.atoms.len() != 2 || geometry.atoms.iter().any(|a| a.charge != 1) {
        return Err(Error::InvalidInput("the built-in engine handles exactly two hydrogen atoms".into()));
    }
    let (a, b) = (&geometry.atoms[0], &geometry.atoms[1]);
    let r2: f64 = (0..3).map(|k| (a.position[k] - b.position[k]).powi(2)).sum();
    if r2 < 1e-12 {
        return Err(Error::InvalidInput("coincident nuclei".into()));
    }
    let shells: Vec<SShell> = geometry.atoms.iter().map(|a| SShell::sto3g_hydrogen(a.position)).collect();
    let ao = ao_integrals(&shells, geometry);
    let e_nuc = geometry.nuclear_repulsion();
    let scf = restricted_hf(&ao.s, &ao.h, &ao.g, 1, e_nuc, opts)?;
    let c = &scf.coefficients;
    let to_mo = |m: &DMatrix<f64>| {
        let t = c.transpose() * m * c;
        (&t + t.transpose()) * 0.5
    };
    Ok(IntegralSet {
        n_spatial: c.ncols(),
        h: to_mo(&ao.h),
        g: transform_eri(&ao.g, c),
        dip: std::array::from_fn(|k| to_mo(&ao.dip[k])),
        second: Some(std::array::from_fn(|k| to_mo(&ao.second[k]))),
        e_nuc,
        d_nuc: geometry.nuclear_dipole(),
        mo_energies: scf.orbital_energies.iter().cloned().collect(),
        occupied: (0..scf.n_occupied).collect(),
    })
}

/// QED-HF reference data for the coherent-state frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QedHfReference {
    /// <0e0ph|H|0e0ph> including the mean-field dipole self-energy.
    pub energy: f64,
    /// <d> of the reference determinant (nuclear + electronic).
    pub dipole: Vec3,
    /// Dipole self-energy contribution alone.
    pub dse: f64,
}

/// Reference energy and dipole expectation of the closed-shell determinant.
///
/// The dipole self-energy expectation of a determinant reduces to
/// `Σ_i Q_ii − Σ_ij m_ij²` over doubly occupied spatial orbitals, with
/// `m = λ·dip` and `Q` the λ-contracted second moment.
pub fn qed_hf_reference(ints: &IntegralSet, cav: &CavityParams) -> QedHfReference {
    let m = ints.lambda_dipole(&cav.lambda);
    let q = ints.lambda_second_moment(&cav.lambda);
    let mut dse = 0.0;
    for &i in &ints.occupied {
        dse += q[(i, i)];
        for &j in &ints.occupied {
            dse -= m[(i, j)] * m[(i, j)];
        }
    }
    QedHfReference {
        energy: ints.reference_energy() + dse,
        dipole: ints.reference_dipole(),
        dse,
    }
}

/// Electronic energy of a density in the AO basis, for consistency checks.
#[cfg(test)]
pub(crate) fn ao_energy(h: &DMatrix<f64>, g: &[f64], density: &DMatrix<f64>) -> f64 {
    let n = h.nrows();
    let mut e = 0.0;
    for p in 0..n {
        for q in 0..n {
            e += density[(p, q)] * h[(p, q)];
            for r in 0..n {
                for s in 0..n {
                    let j = g[((p * n + q) * n + r) * n + s];
                    let k = g[((p * n + s) * n + r) * n + q];
                    e += 0.5 * density[(p, q)] * density[(r, s)] * (j - 0.5 * k);
                }
            }
        }
    }
    e
}

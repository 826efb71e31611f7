//! Contracted s-type Gaussian shells and their analytic integrals.

use std::f64::consts::PI;

pub type Vec3 = [f64; 3];

/// STO-3G hydrogen 1s (ζ = 1.24) exponents.
pub const STO3G_H_EXPONENTS: [f64; 3] = [3.42525091, 0.62391373, 0.16885540];
/// STO-3G contraction coefficients (for normalized primitives).
pub const STO3G_COEFFS: [f64; 3] = [0.15432897, 0.53532814, 0.44463454];

/// Normalized contracted s function: Σ_k c_k N_k exp(-α_k |r - center|²).
#[derive(Debug, Clone, PartialEq)]
pub struct SShell {
    pub center: Vec3,
    /// `(exponent, coefficient × primitive normalization)`
    pub primitives: Vec<(f64, f64)>,
}

impl SShell {
    pub fn new(center: Vec3, exponents: &[f64], coeffs: &[f64]) -> Self {
        let primitives = exponents
            .iter()
            .zip(coeffs)
            .map(|(&a, &c)| (a, c * (2.0 * a / PI).powf(0.75)))
            .collect();
        Self { center, primitives }
    }

    pub fn sto3g_hydrogen(center: Vec3) -> Self {
        Self::new(center, &STO3G_H_EXPONENTS, &STO3G_COEFFS)
    }
}

fn dist2(a: &Vec3, b: &Vec3) -> f64 {
    (0..3).map(|k| (a[k] - b[k]).powi(2)).sum()
}

/// Boys function F₀(t) = ½ √(π/t) erf(√t), with a series below 1e-10.
pub fn boys0(t: f64) -> f64 {
    if t < 1e-10 {
        1.0 - t / 3.0
    } else {
        let s = t.sqrt();
        0.5 * (PI / t).sqrt() * libm::erf(s)
    }
}

/// One-electron integrals between two contracted shells.
#[derive(Debug, Clone, Copy, Default)]
pub struct OneElectron {
    pub overlap: f64,
    pub kinetic: f64,
    /// Position moments <a| r_k |b>.
    pub dipole: Vec3,
    /// Second moments <a| r_k r_l |b> in the order xx, yy, zz, xy, xz, yz.
    pub second: [f64; 6],
}

pub const SECOND_MOMENT_PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];

pub fn one_electron(a: &SShell, b: &SShell) -> OneElectron {
    let mut out = OneElectron::default();
    let ab2 = dist2(&a.center, &b.center);
    for &(ea, ca) in &a.primitives {
        for &(eb, cb) in &b.primitives {
            let p = ea + eb;
            let mu = ea * eb / p;
            let s = (PI / p).powf(1.5) * (-mu * ab2).exp();
            let pc: Vec3 = std::array::from_fn(|k| (ea * a.center[k] + eb * b.center[k]) / p);
            let w = ca * cb;
            out.overlap += w * s;
            out.kinetic += w * mu * (3.0 - 2.0 * mu * ab2) * s;
            for k in 0..3 {
                out.dipole[k] += w * s * pc[k];
            }
            for (i, &(k, l)) in SECOND_MOMENT_PAIRS.iter().enumerate() {
                let delta = if k == l { 0.5 / p } else { 0.0 };
                out.second[i] += w * s * (pc[k] * pc[l] + delta);
            }
        }
    }
    out
}

/// <a| -Z / |r - C| |b>
pub fn nuclear_attraction(a: &SShell, b: &SShell, charge: f64, c: &Vec3) -> f64 {
    let ab2 = dist2(&a.center, &b.center);
    let mut v = 0.0;
    for &(ea, ca) in &a.primitives {
        for &(eb, cb) in &b.primitives {
            let p = ea + eb;
            let mu = ea * eb / p;
            let pc: Vec3 = std::array::from_fn(|k| (ea * a.center[k] + eb * b.center[k]) / p);
            v -= ca * cb * charge * 2.0 * PI / p * (-mu * ab2).exp() * boys0(p * dist2(&pc, c));
        }
    }
    v
}

/// Chemists' notation (ab|cd).
pub fn electron_repulsion(a: &SShell, b: &SShell, c: &SShell, d: &SShell) -> f64 {
    let ab2 = dist2(&a.center, &b.center);
    let cd2 = dist2(&c.center, &d.center);
    let mut v = 0.0;
    for &(ea, ca) in &a.primitives {
        for &(eb, cb) in &b.primitives {
            let p = ea + eb;
            let pc: Vec3 = std::array::from_fn(|k| (ea * a.center[k] + eb * b.center[k]) / p);
            let kab = (-ea * eb / p * ab2).exp();
            for &(ec, cc) in &c.primitives {
                for &(ed, cd) in &d.primitives {
                    let q = ec + ed;
                    let qc: Vec3 = std::array::from_fn(|k| (ec * c.center[k] + ed * d.center[k]) / q);
                    let kcd = (-ec * ed / q * cd2).exp();
                    let pre = 2.0 * PI.powf(2.5) / (p * q * (p + q).sqrt());
                    v += ca * cb * cc * cd * pre * kab * kcd * boys0(p * q / (p + q) * dist2(&pc, &qc));
                }
            }
        }
    }
    v
}

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

pub const DEFAULT_ZNE_FACTORS: [i64; 6] = [1, 3, 5, 51, 101, 201];
pub const FIT_MAX_ITER: usize = 500;
pub const FIT_STEP_TOL: f64 = 1e-12;

/// `f(m) = a·e^{−g·m} + c`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ExpFit {
    pub a: f64,
    pub g: f64,
    pub c: f64,
}

impl ExpFit {
    pub fn eval(&self, m: f64) -> f64 {
        self.a * (-self.g * m).exp() + self.c
    }

    pub fn at_zero(&self) -> f64 {
        self.a + self.c
    }
}

/// Noise-scaled expectations and their exponential fit.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ZneSeries {
    pub factors: Vec<i64>,
    pub values: Vec<f64>,
    pub fit: ExpFit,
    pub fit_rms: f64,
    pub iterations: usize,
    /// The fit did not converge and [`zne_extrapolate`] uses the two
    /// smallest factors linearly.
    pub linear_fallback: bool,
}

impl ZneSeries {
    /// Validate the factors and fit the series.
    pub fn fit(factors: &[i64], values: &[f64]) -> Result<Self> {
        if factors.len() != values.len() {
            return Err(Error::InvalidInput(format!("{} factors but {} values", factors.len(), values.len())));
        }
        if factors.len() < 3 {
            return Err(Error::InvalidInput("zero-noise extrapolation needs at least 3 factors".into()));
        }
        if let Some(&m) = factors.iter().find(|&&m| m < 1 || m % 2 == 0) {
            return Err(Error::InvalidNoiseFactor(m));
        }
        if factors.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("noise factors must be strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite value in noise series".into()));
        }
        let m: Vec<f64> = factors.iter().map(|&f| f as f64).collect();
        let (fit, iterations, converged) = fit_exponential(&m, values);
        let fit_rms = rms(&m, values, &fit);
        Ok(Self {
            factors: factors.to_vec(),
            values: values.to_vec(),
            fit,
            fit_rms,
            iterations,
            linear_fallback: !converged || !fit_rms.is_finite(),
        })
    }

    /// Linear extrapolation through the two smallest factors.
    pub fn linear_estimate(&self) -> f64 {
        let (m1, m2) = (self.factors[0] as f64, self.factors[1] as f64);
        let (y1, y2) = (self.values[0], self.values[1]);
        y1 - m1 * (y2 - y1) / (m2 - m1)
    }
}

/// Zero-noise estimate `a + c`, or the linear fallback.
pub fn zne_extrapolate(series: &ZneSeries) -> f64 {
    if series.linear_fallback {
        series.linear_estimate()
    } else {
        series.fit.at_zero()
    }
}

fn rms(m: &[f64], y: &[f64], f: &ExpFit) -> f64 {
    (m.iter().zip(y).map(|(&m, &y)| (f.eval(m) - y).powi(2)).sum::<f64>() / m.len() as f64).sqrt()
}

/// Best `(a, c)` for fixed `g` by linear least squares.
fn linear_part(m: &[f64], y: &[f64], g: f64) -> (f64, f64) {
    let n = m.len() as f64;
    let e: Vec<f64> = m.iter().map(|&m| (-g * m).exp()).collect();
    let (se, sy) = (e.iter().sum::<f64>(), y.iter().sum::<f64>());
    let see: f64 = e.iter().map(|v| v * v).sum();
    let sey: f64 = e.iter().zip(y).map(|(a, b)| a * b).sum();
    let det = n * see - se * se;
    if det.abs() < 1e-300 {
        return (0.0, sy / n);
    }
    let a = (n * sey - se * sy) / det;
    (a, (sy - a * se) / n)
}

/// Initial decay rate from a log-linear regression of the finite-difference
/// slopes against the interval midpoints.
fn initial_rate(m: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = m
        .windows(2)
        .zip(y.windows(2))
        .filter_map(|(mw, yw)| {
            let slope = (yw[1] - yw[0]) / (mw[1] - mw[0]);
            (slope != 0.0).then(|| (0.5 * (mw[0] + mw[1]), slope.abs().ln()))
        })
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / n, sy / n);
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return 0.0;
    }
    (-sxy / sxx).max(0.0)
}

/// Levenberg-Marquardt on the raw residuals with `g` projected onto `g ≥ 0`.
/// Returns the fit, the iteration count and whether the step tolerance was
/// reached.
pub fn fit_exponential(m: &[f64], y: &[f64]) -> (ExpFit, usize, bool) {
    let spread = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - y.iter().cloned().fold(f64::INFINITY, f64::min);
    let scale = y.iter().map(|v| v.abs()).fold(1e-300, f64::max);
    if spread <= 1e-14 * scale {
        let c = y.iter().sum::<f64>() / y.len() as f64;
        return (ExpFit { a: 0.0, g: 0.0, c }, 0, true);
    }
    let g0 = initial_rate(m, y);
    let (a0, c0) = linear_part(m, y, g0);
    let mut p = Vector3::new(a0, g0, c0);
    let cost = |p: &Vector3<f64>| -> f64 {
        m.iter().zip(y).map(|(&m, &y)| (p[0] * (-p[1] * m).exp() + p[2] - y).powi(2)).sum()
    };
    let mut f = cost(&p);
    let mut mu = 1e-3;
    for it in 1..=FIT_MAX_ITER {
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for (&m, &y) in m.iter().zip(y) {
            let e = (-p[1] * m).exp();
            let r = p[0] * e + p[2] - y;
            let j = Vector3::new(e, -p[0] * m * e, 1.0);
            jtj += j * j.transpose();
            jtr += j * r;
        }
        loop {
            let mut lhs = jtj;
            for k in 0..3 {
                lhs[(k, k)] += mu * jtj[(k, k)].max(1e-300);
            }
            let step = match lhs.lu().solve(&(-jtr)) {
                Some(s) => s,
                None => {
                    mu *= 10.0;
                    if mu > 1e20 {
                        return (fit_of(&p), it, true);
                    }
                    continue;
                }
            };
            let mut trial = p + step;
            trial[1] = trial[1].max(0.0);
            let taken = trial - p;
            let ft = cost(&trial);
            if ft <= f {
                p = trial;
                f = ft;
                mu = (mu * 0.3).max(1e-15);
                if taken.norm() <= FIT_STEP_TOL * (p.norm() + FIT_STEP_TOL) {
                    return (fit_of(&p), it, true);
                }
                break;
            }
            mu *= 10.0;
            if mu > 1e20 {
                // no descent direction left: stationary point
                return (fit_of(&p), it, true);
            }
        }
    }
    (fit_of(&p), FIT_MAX_ITER, false)
}

fn fit_of(p: &Vector3<f64>) -> ExpFit {
    ExpFit { a: p[0], g: p[1], c: p[2] }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(f: ExpFit) -> Vec<f64> {
        DEFAULT_ZNE_FACTORS.iter().map(|&m| f.eval(m as f64)).collect()
    }

    #[test]
    fn exact_series_recovered() {
        let truth = ExpFit { a: -0.3, g: 0.02, c: -0.8 };
        let s = ZneSeries::fit(&DEFAULT_ZNE_FACTORS, &synthetic(truth)).unwrap();
        assert!(!s.linear_fallback);
        assert!((zne_extrapolate(&s) - -1.1).abs() < 1e-8);
        assert!((s.fit.g - 0.02).abs() < 1e-8);
        assert!(s.fit_rms < 1e-10);
    }

    #[test]
    fn constant_series() {
        let s = ZneSeries::fit(&DEFAULT_ZNE_FACTORS, &[-0.9; 6]).unwrap();
        assert_eq!(zne_extrapolate(&s), -0.9);
    }

    #[test]
    fn various_rates() {
        for (a, g, c) in [(0.5, 0.001, 0.1), (-1.2, 0.3, 0.05), (2.0, 0.04, -1.0), (0.01, 0.08, 0.3)] {
            let truth = ExpFit { a, g, c };
            let s = ZneSeries::fit(&DEFAULT_ZNE_FACTORS, &synthetic(truth)).unwrap();
            assert!((zne_extrapolate(&s) - (a + c)).abs() < 1e-7, "{truth:?} -> {:?}", s.fit);
        }
    }

    #[test]
    fn rejects_bad_factors() {
        assert!(ZneSeries::fit(&[1, 3], &[0.0, 0.0]).is_err());
        assert!(matches!(ZneSeries::fit(&[1, 2, 5], &[0.0; 3]), Err(Error::InvalidNoiseFactor(2))));
        assert!(ZneSeries::fit(&[1, 5, 3], &[0.0; 3]).is_err());
        assert!(ZneSeries::fit(&[1, 3, 5], &[0.0, f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn linear_fallback_value() {
        let mut s = ZneSeries::fit(&[1, 3, 5], &[1.0, 0.8, 0.7]).unwrap();
        s.linear_fallback = true;
        assert!((zne_extrapolate(&s) - 1.1).abs() < 1e-12);
    }
}

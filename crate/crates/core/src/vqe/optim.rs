/// Derivative-free Nelder-Mead simplex minimizer.
///
/// Terminates when both the spread of simplex values is within `ftol` and
/// every vertex lies within `xtol` (max-norm) of the best one, or after
/// `max_iter` iterations.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NelderMead {
    pub ftol: f64,
    pub xtol: f64,
    pub max_iter: usize,
    /// Offset of the initial simplex vertices along each axis.
    pub initial_step: f64,
    /// Re-evaluate the best vertex on every shrink so one lucky sample of a
    /// noisy objective cannot anchor the simplex.
    #[serde(default)]
    pub reevaluate_on_shrink: bool,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self { ftol: 1e-6, xtol: 1e-5, max_iter: 500, initial_step: 0.05, reevaluate_on_shrink: true }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct OptResult {
    pub x: Vec<f64>,
    pub fun: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

impl NelderMead {
    pub fn minimize<F: FnMut(&[f64]) -> f64>(&self, mut f: F, x0: &[f64]) -> OptResult {
        let n = x0.len();
        let mut evals = 0usize;
        let mut eval = |x: &[f64]| {
            evals += 1;
            f(x)
        };
        if n == 0 {
            let fun = eval(x0);
            return OptResult { x: vec![], fun, iterations: 0, evaluations: 1, converged: true };
        }
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((x0.to_vec(), eval(x0)));
        for k in 0..n {
            let mut x = x0.to_vec();
            x[k] += if x[k] == 0.0 { self.initial_step } else { self.initial_step * x[k].abs().max(1.0) };
            let v = eval(&x);
            simplex.push((x, v));
        }
        let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
        let lerp = |a: &[f64], b: &[f64], t: f64| a.iter().zip(b).map(|(a, b)| a + t * (b - a)).collect::<Vec<f64>>();
        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.max_iter {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let (best, fbest) = (&simplex[0].0, simplex[0].1);
            let fspread = simplex[1..].iter().map(|s| (s.1 - fbest).abs()).fold(0.0, f64::max);
            let xspread = simplex[1..]
                .iter()
                .flat_map(|s| s.0.iter().zip(best).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if fspread <= self.ftol && xspread <= self.xtol {
                converged = true;
                break;
            }
            iterations += 1;
            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, v) in centroid.iter_mut().zip(x) {
                    *c += v / n as f64;
                }
            }
            let worst = simplex[n].clone();
            let xr = lerp(&centroid, &worst.0, -alpha);
            let fr = eval(&xr);
            if fr < simplex[0].1 {
                let xe = lerp(&centroid, &worst.0, -gamma);
                let fe = eval(&xe);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            let (xc, fc) = if fr < worst.1 {
                let x = lerp(&centroid, &xr, rho);
                let v = eval(&x);
                (x, v)
            } else {
                let x = lerp(&centroid, &worst.0, rho);
                let v = eval(&x);
                (x, v)
            };
            if fc < fr.min(worst.1) {
                simplex[n] = (xc, fc);
                continue;
            }
            let x0 = simplex[0].0.clone();
            if self.reevaluate_on_shrink {
                simplex[0].1 = eval(&x0);
            }
            for s in simplex.iter_mut().skip(1) {
                s.0 = lerp(&x0, &s.0, sigma);
                s.1 = eval(&s.0);
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, fun) = simplex.swap_remove(0);
        OptResult { x, fun, iterations, evaluations: evals, converged }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let r = NelderMead::default().minimize(|x| (x[0] - 0.3).powi(2) + 2.0 * (x[1] + 0.7).powi(2) + 1.0, &[0.0, 0.0]);
        assert!(r.converged);
        assert!((r.x[0] - 0.3).abs() < 1e-4 && (r.x[1] + 0.7).abs() < 1e-4);
        assert!((r.fun - 1.0).abs() < 1e-6);
    }

    #[test]
    fn rosenbrock() {
        let nm = NelderMead { ftol: 1e-12, xtol: 1e-8, max_iter: 5000, initial_step: 0.1, reevaluate_on_shrink: false };
        let r = nm.minimize(|x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2), &[-1.2, 1.0]);
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn iteration_cap() {
        let nm = NelderMead { max_iter: 7, ..NelderMead::default() };
        let r = nm.minimize(|x| (x[0] - 5.0).powi(2), &[0.0]);
        assert!(!r.converged);
        assert_eq!(r.iterations, 7);
    }
}

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::density::Rho;
use super::noise::NoiseModel;
use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::pauli::{DenseState, Pauli, PauliSum};

/// Terms measured together in one product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementGroup {
    /// Measurement letter per qubit (`I` where no term acts).
    pub basis: Vec<Pauli>,
    /// `(coefficient, support mask)` of each member; the eigenvalue of a
    /// member on outcome `b` is `(−1)^{|b ∧ support|}`.
    pub terms: Vec<(f64, u64)>,
}

impl MeasurementGroup {
    /// `Σ_k c_k Σ_b p(b) (−1)^{|b∧s_k|}` for a (quasi-)distribution.
    pub fn expectation(&self, dist: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|&(c, s)| {
                c * dist
                    .iter()
                    .enumerate()
                    .map(|(b, &p)| if (b as u64 & s).count_ones() % 2 == 0 { p } else { -p })
                    .sum::<f64>()
            })
            .sum()
    }

    fn rotation(&self) -> Vec<Gate> {
        let mut g = Vec::new();
        for (q, l) in self.basis.iter().enumerate() {
            match l {
                Pauli::X => g.push(Gate::H(q)),
                Pauli::Y => g.extend([Gate::Sdg(q), Gate::H(q)]),
                _ => {}
            }
        }
        g
    }
}

/// Grouped form of a Hermitian observable.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementPlan {
    pub n_qubits: usize,
    pub identity: f64,
    pub groups: Vec<MeasurementGroup>,
}

impl MeasurementPlan {
    /// Greedy qubit-wise commuting grouping in term-key order.
    pub fn new(obs: &PauliSum) -> Result<Self> {
        if !obs.is_hermitian(crate::pauli::IMAG_RESIDUE_TOL) {
            return Err(Error::NonHermitian(obs.max_imag()));
        }
        let n = obs.n_qubits();
        let mut groups: Vec<MeasurementGroup> = Vec::new();
        for (c, p) in obs.iter() {
            if p.is_identity() {
                continue;
            }
            let fits = |g: &MeasurementGroup| {
                (0..n).all(|q| {
                    let l = p.get(q);
                    l == Pauli::I || g.basis[q] == Pauli::I || g.basis[q] == l
                })
            };
            let term = (c.re, p.support());
            match groups.iter_mut().find(|g| fits(g)) {
                Some(g) => {
                    for q in 0..n {
                        if p.get(q) != Pauli::I {
                            g.basis[q] = p.get(q);
                        }
                    }
                    g.terms.push(term);
                }
                None => groups.push(MeasurementGroup {
                    basis: (0..n).map(|q| p.get(q)).collect(),
                    terms: vec![term],
                }),
            }
        }
        Ok(Self { n_qubits: n, identity: obs.identity_coefficient().re, groups })
    }

    /// Combine per-group (quasi-)distributions into the observable value.
    pub fn combine(&self, dists: &[Vec<f64>]) -> f64 {
        self.identity + self.groups.iter().zip(dists).map(|(g, d)| g.expectation(d)).sum::<f64>()
    }
}

/// Outcome counts; keys are basis indices (bit `q` = qubit `q`).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ShotResult {
    pub counts: BTreeMap<u64, u64>,
    pub shots: u64,
}

impl ShotResult {
    pub fn frequencies(&self, n_qubits: usize) -> Vec<f64> {
        let mut f = vec![0.0; 1 << n_qubits];
        for (&b, &c) in &self.counts {
            f[b as usize] = c as f64 / self.shots as f64;
        }
        f
    }
}

/// Push a distribution through per-qubit confusion matrices.
pub fn apply_confusion(dist: &[f64], n_qubits: usize, noise: &NoiseModel) -> Vec<f64> {
    let mut p = dist.to_vec();
    for q in 0..n_qubits {
        let m = noise.readout_for(q);
        if m == super::noise::IDEAL_READOUT {
            continue;
        }
        let bit = 1 << q;
        for b in (0..p.len()).filter(|b| b & bit == 0) {
            let (p0, p1) = (p[b], p[b | bit]);
            p[b] = m[0][0] * p0 + m[1][0] * p1;
            p[b | bit] = m[0][1] * p0 + m[1][1] * p1;
        }
    }
    p
}

/// Outcome distribution of each group: ideal basis rotation, then readout
/// confusion.
pub fn group_distributions(state: &DenseState, plan: &MeasurementPlan, noise: &NoiseModel) -> Vec<Vec<f64>> {
    let rho = Rho::from_state(state);
    plan.groups
        .iter()
        .map(|g| {
            let mut r = rho.clone();
            for gate in g.rotation() {
                r.apply_1q(gate.qubits()[0], &gate.matrix_1q(&[]));
            }
            let diag: Vec<f64> = r.diagonal().into_iter().map(|v| v.max(0.0)).collect();
            apply_confusion(&diag, plan.n_qubits, noise)
        })
        .collect()
}

/// Draw `shots` outcomes from `dist` by sequential binomial splitting.
pub fn sample_counts<R: Rng>(dist: &[f64], shots: u64, rng: &mut R) -> Result<ShotResult> {
    if shots == 0 {
        return Err(Error::InvalidInput("shots must be at least 1".into()));
    }
    let total: f64 = dist.iter().sum();
    let mut left = shots;
    let mut mass = total;
    let mut counts = BTreeMap::new();
    for (b, &p) in dist.iter().enumerate() {
        if left == 0 {
            break;
        }
        let k = if b == dist.len() - 1 || mass <= p {
            left
        } else {
            let q = (p / mass).clamp(0.0, 1.0);
            Binomial::new(left, q).map_err(|e| Error::InvalidInput(e.to_string()))?.sample(rng)
        };
        if k > 0 {
            counts.insert(b as u64, k);
        }
        left -= k;
        mass -= p;
    }
    Ok(ShotResult { counts, shots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::noise::symmetric_flip;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn qwc_grouping() {
        let h = PauliSum::from_labels([(1.0, "ZI"), (1.0, "IZ"), (1.0, "ZZ"), (0.5, "XX"), (0.2, "XI"), (0.1, "YY"), (2.0, "II")])
            .unwrap();
        let plan = MeasurementPlan::new(&h).unwrap();
        assert_eq!(plan.groups.len(), 3);
        assert_eq!(plan.identity, 2.0);
        let total: usize = plan.groups.iter().map(|g| g.terms.len()).sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn ideal_readout_all_zero() {
        let rho = DenseState::basis(2, 0);
        let plan = MeasurementPlan::new(&PauliSum::from_labels([(1.0, "ZZ")]).unwrap()).unwrap();
        let d = group_distributions(&rho, &plan, &NoiseModel::ideal());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = sample_counts(&d[0], 1000, &mut rng).unwrap();
        assert_eq!(s.counts.get(&0), Some(&1000));
        assert_eq!(s.counts.len(), 1);
    }

    #[test]
    fn readout_flip_binomial() {
        let rho = DenseState::basis(2, 0);
        let plan = MeasurementPlan::new(&PauliSum::from_labels([(1.0, "ZZ")]).unwrap()).unwrap();
        let noise = NoiseModel::ideal().with_readout(vec![symmetric_flip(0.01)]);
        let d = group_distributions(&rho, &plan, &noise);
        let p00 = 0.99f64 * 0.99;
        assert!((d[0][0] - p00).abs() < 1e-15);
        let n = 20_000u64;
        let sigma = (n as f64 * p00 * (1.0 - p00)).sqrt();
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = sample_counts(&d[0], n, &mut rng).unwrap();
            let k = *s.counts.get(&0).unwrap_or(&0) as f64;
            assert!((k - n as f64 * p00).abs() < 3.5 * sigma);
            assert_eq!(s.counts.values().sum::<u64>(), n);
        }
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let d = vec![0.1, 0.2, 0.3, 0.4];
        let a = sample_counts(&d, 5000, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = sample_counts(&d, 5000, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_zero_shots() {
        assert!(sample_counts(&[1.0], 0, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
    }
}

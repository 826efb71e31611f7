use super::mixed::{Ladder, MixedOperator};
use crate::chem::{qed_hf_reference, CavityParams, IntegralSet};
use crate::error::Result;

use Ladder::{Annihilate as A, Create as C};

/// Spin-orbital index in block order: all α orbitals, then all β.
#[inline]
pub fn spin_orbital(spatial: usize, beta: bool, n_spatial: usize) -> usize {
    spatial + if beta { n_spatial } else { 0 }
}

/// Occupation bitmask (over spin-orbitals) of the closed-shell reference.
pub fn reference_occupation(ints: &IntegralSet) -> u64 {
    let n = ints.n_spatial;
    ints.occupied
        .iter()
        .fold(0u64, |m, &i| m | 1 << spin_orbital(i, false, n) | 1 << spin_orbital(i, true, n))
}

/// Coherent-state Pauli-Fierz Hamiltonian for one cavity mode in the
/// dipole approximation.
///
/// With `m = λ·dip` (position moments, so the electronic dipole operator is
/// `−Σ m_pq a†_p a_q`) and `c` its reference expectation, the fluctuation is
/// `λ·Δd = −Σ m_pq a†_p a_q − c` and the operator reads
///
/// ```text
/// H = Σ h_pq a†p aq + ¼ Σ ḡ_pqrs a†p a†q as ar + ω b†b
///     − √(ω/2) (λ·Δd)(b† + b) + ½ (λ·Δd)²
/// ```
///
/// The self-energy square is normal ordered; its one-body part uses the
/// λ-contracted second-moment integrals `Q` rather than `m·m`, which keeps
/// the full quadrupole contribution outside the finite orbital space. The
/// nuclear repulsion and `c²/2` go into the scalar constant.
pub fn build_pauli_fierz(ints: &IntegralSet, cav: &CavityParams) -> Result<MixedOperator> {
    let n = ints.n_spatial;
    let nso = 2 * n;
    let mut op = MixedOperator::new(nso);
    op.add_constant(ints.e_nuc);

    let so = |p: usize, s: bool| spin_orbital(p, s, n);
    for s in [false, true] {
        for p in 0..n {
            for q in 0..n {
                op.push(ints.h[(p, q)], &[(so(p, s), C), (so(q, s), A)], &[])?;
            }
        }
    }

    // ¼ Σ (⟨pq|rs⟩ − ⟨pq|sr⟩) a†p a†q as ar, ⟨pq|rs⟩ = (pr|qs)
    let spin_of = |k: usize| k >= n;
    let spatial = |k: usize| k % n;
    let phys = |p: usize, q: usize, r: usize, s: usize| {
        if spin_of(p) == spin_of(r) && spin_of(q) == spin_of(s) {
            ints.g_at(spatial(p), spatial(r), spatial(q), spatial(s))
        } else {
            0.0
        }
    };
    for p in 0..nso {
        for q in 0..nso {
            if p == q {
                continue;
            }
            for r in 0..nso {
                for s in 0..nso {
                    if r == s {
                        continue;
                    }
                    let v = 0.25 * (phys(p, q, r, s) - phys(p, q, s, r));
                    if v != 0.0 {
                        op.push(v, &[(p, C), (q, C), (s, A), (r, A)], &[])?;
                    }
                }
            }
        }
    }

    op.push(cav.omega, &[], &[C, A])?;
    if !cav.is_coupled() {
        return Ok(op);
    }

    let m = ints.lambda_dipole(&cav.lambda);
    let quad = ints.lambda_second_moment(&cav.lambda);
    let c = -2.0 * ints.occupied.iter().map(|&i| m[(i, i)]).sum::<f64>();
    debug_assert!({
        let r = qed_hf_reference(ints, cav);
        let nuc: f64 = (0..3).map(|k| cav.lambda[k] * ints.d_nuc[k]).sum();
        let tot: f64 = (0..3).map(|k| cav.lambda[k] * r.dipole[k]).sum();
        (tot - nuc - c).abs() < 1e-10
    });

    // −√(ω/2)(λ·Δd)(b† + b)
    let k = -(cav.omega / 2.0).sqrt();
    for b in [C, A] {
        op.push(-k * c, &[], &[b])?;
        for s in [false, true] {
            for p in 0..n {
                for q in 0..n {
                    op.push(-k * m[(p, q)], &[(so(p, s), C), (so(q, s), A)], &[b])?;
                }
            }
        }
    }

    // ½[Σ Q a†a + Σ m m a†a†aa + 2c Σ m a†a + c²]
    op.add_constant(0.5 * c * c);
    for s in [false, true] {
        for p in 0..n {
            for q in 0..n {
                op.push(0.5 * quad[(p, q)] + c * m[(p, q)], &[(so(p, s), C), (so(q, s), A)], &[])?;
            }
        }
    }
    for s1 in [false, true] {
        for s2 in [false, true] {
            for p in 0..n {
                for q in 0..n {
                    for r in 0..n {
                        for t in 0..n {
                            let (ip, iq, ir, it) = (so(p, s1), so(q, s1), so(r, s2), so(t, s2));
                            if ip == ir || iq == it {
                                continue;
                            }
                            op.push(
                                0.5 * m[(p, q)] * m[(r, t)],
                                &[(ip, C), (ir, C), (it, A), (iq, A)],
                                &[],
                            )?;
                        }
                    }
                }
            }
        }
    }
    Ok(op)
}

/// `b†b` as a mixed operator.
pub fn photon_number_operator(n_modes: usize) -> MixedOperator {
    let mut op = MixedOperator::new(n_modes);
    op.push(1.0, &[], &[C, A]).expect("no fermion indices");
    op
}

/// `Σ_{p∈modes} a†p ap`.
pub fn fermion_number_operator(n_modes: usize, modes: u64) -> MixedOperator {
    let mut op = MixedOperator::new(n_modes);
    for p in (0..n_modes).filter(|p| modes >> p & 1 == 1) {
        op.push(1.0, &[(p, C), (p, A)], &[]).expect("index in range");
    }
    op
}

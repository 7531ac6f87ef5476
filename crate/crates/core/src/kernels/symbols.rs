//! Fourier symbols of the elementary kernels and of the composite kernels
//! used by the Duhamel integrals.
//!
//! Every kernel is a short sum Σ coef(k, nS)·e^{rate·x}, with the rate one
//! of Λ₋, −Λ₊ = Λ₋ − 1, −|k| or −k².  Keeping that structure explicit is
//! what lets the solver integrate the x-dependence exactly.

use num_complex::Complex64 as C64;

use super::dispersion::Dispersion;
use crate::error::{Result, WakeError};
use crate::field::{Slice, ZERO};
use crate::grid::Grid;
use crate::ops::sigma;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Exponential rate of a symbol term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rate {
    /// e^{Λ₋ x}
    Oseen,
    /// e^{−Λ₊ x} = e^{−x} e^{Λ₋ x}
    Upstream,
    /// e^{−|k| x}
    Poisson,
    /// e^{−k² x}
    Heat,
}

impl Rate {
    pub fn value(self, k: f64, d: &Dispersion) -> C64 {
        match self {
            Rate::Oseen => d.lambda_minus,
            Rate::Upstream => -d.lambda_plus,
            Rate::Poisson => C64::new(-k.abs(), 0.0),
            Rate::Heat => C64::new(-k * k, 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coef: C64,
    pub rate: Rate,
}

/// Elementary and composite kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelId {
    K1,
    K2,
    K5,
    K6,
    K7,
    K8,
    K10,
    K12,
    K13,
    Kr,
    Ki,
    F,
    G,
    FStar,
    GStar,
    K0,
    Kc,
    /// K_{side, source, target}: side 1 = downstream integral (∫_{x₀}^x),
    /// side 2 = upstream integral (∫_x^∞); source P or Q; target u, v or ω.
    Composite(Side, Source, Target),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Down,
    Up,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    P,
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    U,
    V,
    Omega,
}

impl KernelId {
    pub const ELEMENTARY: [KernelId; 17] = [
        KernelId::K1,
        KernelId::K2,
        KernelId::K5,
        KernelId::K6,
        KernelId::K7,
        KernelId::K8,
        KernelId::K10,
        KernelId::K12,
        KernelId::K13,
        KernelId::Kr,
        KernelId::Ki,
        KernelId::F,
        KernelId::G,
        KernelId::FStar,
        KernelId::GStar,
        KernelId::K0,
        KernelId::Kc,
    ];

    pub fn composites() -> Vec<KernelId> {
        let mut v = Vec::with_capacity(12);
        for side in [Side::Down, Side::Up] {
            for src in [Source::P, Source::Q] {
                for tgt in [Target::Omega, Target::U, Target::V] {
                    v.push(KernelId::Composite(side, src, tgt));
                }
            }
        }
        v
    }
}

/// Prefactors of the Oseen-rate kernels: coefficient of e^{Λ₋x}.
fn oseen_coef(id: KernelId, k: f64, ns: f64, d: &Dispersion) -> C64 {
    let (l0, lp, lm) = (d.lambda0, d.lambda_plus, d.lambda_minus);
    let ins = C64::new(0.0, ns);
    let ik = C64::new(0.0, k);
    match id {
        KernelId::K1 => C64::new(1.0, 0.0),
        KernelId::K2 => -ik / l0,
        KernelId::K5 => k * k / (l0 * (lp + ins)),
        KernelId::K6 => k * ns / (l0 * (lp + ins)),
        KernelId::K7 => -ins * lp / (l0 * (lp + ins)),
        KernelId::K8 => lm.re / l0,
        KernelId::K10 => I * lm.im / l0,
        // At n = 0, k²/Λ₋ = −Λ₊ removes the removable singularity at k = 0.
        KernelId::K12 if ns == 0.0 => -lp / l0,
        KernelId::K12 => k * k / (l0 * (lm + ins)),
        KernelId::K13 if ns == 0.0 => ZERO,
        KernelId::K13 => k * ns / (l0 * (lm + ins)),
        KernelId::Kr if ns == 0.0 => ZERO,
        KernelId::Kr => ins * lm.re / (l0 * (lm + ins)),
        KernelId::Ki if ns == 0.0 => ZERO,
        KernelId::Ki => -ns * lm.im / (l0 * (lm + ins)),
        _ => unreachable!("not an Oseen-rate kernel"),
    }
}

/// Coefficients of the Poisson-rate kernels F, G, F*, G*, using the k → 0
/// limits where the denominator vanishes.
fn poisson_coef(id: KernelId, k: f64, ns: f64) -> C64 {
    let ik = C64::new(0.0, k);
    let s = ns * sigma(k);
    if k == 0.0 {
        return match id {
            KernelId::F | KernelId::FStar if ns == 0.0 => C64::new(1.0, 0.0),
            _ => ZERO,
        };
    }
    match id {
        KernelId::F => ik / (ik + s),
        KernelId::G => k.abs() / (ik + s),
        KernelId::FStar => ik / (ik - s),
        KernelId::GStar => -k.abs() / (ik - s),
        KernelId::K0 => C64::new(1.0, 0.0),
        _ => unreachable!("not a Poisson-rate kernel"),
    }
}

fn t(coef: C64, rate: Rate) -> Term {
    Term { coef, rate }
}

/// Expansion of `id` into exponential terms at one (k, nS).
pub fn terms(id: KernelId, k: f64, ns: f64) -> Vec<Term> {
    let d = Dispersion::new(k, ns);
    terms_with(id, k, ns, &d)
}

pub fn terms_with(id: KernelId, k: f64, ns: f64, d: &Dispersion) -> Vec<Term> {
    use KernelId::*;
    use Rate::*;
    let o = |id| oseen_coef(id, k, ns, d);
    let p = |id| poisson_coef(id, k, ns);
    match id {
        K1 | K2 | K5 | K6 | K7 | K8 | K10 | K12 | K13 | Kr | Ki => vec![t(o(id), Oseen)],
        F | G | FStar | GStar => vec![t(p(id), Poisson)],
        K0 => vec![t(C64::new(1.0, 0.0), Poisson)],
        Kc => vec![t(if ns == 0.0 { C64::new(1.0, 0.0) } else { ZERO }, Heat)],
        Composite(side, src, tgt) => {
            let w11 = -o(K8) - o(K10);
            let w12 = -o(K2);
            let w21 = -(o(K1) + o(K8) + o(K10));
            let w22 = -o(K2);
            match (side, src, tgt) {
                (Side::Down, Source::P, Target::Omega) => vec![t(w11, Oseen)],
                (Side::Down, Source::Q, Target::Omega) => vec![t(w12, Oseen)],
                (Side::Up, Source::P, Target::Omega) => vec![t(w21, Upstream)],
                (Side::Up, Source::Q, Target::Omega) => vec![t(w22, Upstream)],
                (Side::Down, Source::P, Target::U) => vec![t(o(K2) - o(K13), Oseen)],
                (Side::Down, Source::Q, Target::U) => vec![t(-o(K12), Oseen), t(-p(F), Poisson)],
                (Side::Up, Source::P, Target::U) => vec![t(o(K2) - o(K6), Upstream)],
                (Side::Up, Source::Q, Target::U) => vec![t(-o(K5), Upstream), t(p(FStar), Poisson)],
                (Side::Down, Source::P, Target::V) => vec![t(w11 + o(Kr) + o(Ki), Oseen)],
                (Side::Down, Source::Q, Target::V) => vec![t(w12 + o(K13), Oseen), t(p(G), Poisson)],
                (Side::Up, Source::P, Target::V) => vec![t(w21 - o(K7), Upstream)],
                (Side::Up, Source::Q, Target::V) => vec![t(w22 + o(K6), Upstream), t(-p(GStar), Poisson)],
            }
        }
    }
}

/// Evaluate a term list at separation x.
pub fn eval_terms(terms: &[Term], x: f64, k: f64, d: &Dispersion) -> C64 {
    terms.iter().map(|t| t.coef * (t.rate.value(k, d) * x).exp()).sum()
}

/// symbol(id, x, k, nS).
pub fn symbol(id: KernelId, x: f64, k: f64, ns: f64) -> Result<C64> {
    if x < 0.0 {
        return Err(WakeError::NegativeSeparation(x));
    }
    let d = Dispersion::new(k, ns);
    Ok(eval_terms(&terms_with(id, k, ns, &d), x, k, &d))
}

/// Multiply every (n, k) coefficient of `f` by symbol(id, x, k, nS).
/// The Nyquist coefficient is dropped.
pub fn apply_kernel(grid: &Grid, id: KernelId, x: f64, strouhal: f64, f: &Slice) -> Result<Slice> {
    if x < 0.0 {
        return Err(WakeError::NegativeSeparation(x));
    }
    let k = grid.k();
    let nyq = grid.nyquist();
    Ok(f.map(|n, m, c| {
        if m == nyq {
            ZERO
        } else {
            c * symbol(id, x, k[m], n as f64 * strouhal).expect("x checked")
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn k1_at_origin_is_one() {
        for &x in &[0.0, 0.5, 10.0, 1e3] {
            assert_eq!(symbol(KernelId::K1, x, 0.0, 0.0).unwrap(), C64::new(1.0, 0.0));
        }
    }

    #[test]
    fn f_equals_k0_at_n_zero() {
        for &k in &[0.0, 0.1, -0.7, 3.0] {
            for &x in &[0.0, 0.3, 4.0] {
                let a = symbol(KernelId::F, x, k, 0.0).unwrap();
                let b = symbol(KernelId::K0, x, k, 0.0).unwrap();
                assert!(close(a, b, 1e-15));
            }
        }
    }

    #[test]
    fn identity_at_zero_separation() {
        for &k in &[0.0, 0.2, -1.3] {
            for &ns in &[0.0, 2.0] {
                assert_eq!(symbol(KernelId::K1, 0.0, k, ns).unwrap(), C64::new(1.0, 0.0));
                assert_eq!(symbol(KernelId::K0, 0.0, k, ns).unwrap(), C64::new(1.0, 0.0));
            }
        }
    }

    #[test]
    fn negative_separation_rejected() {
        assert!(matches!(symbol(KernelId::K1, -1.0, 0.0, 0.0), Err(WakeError::NegativeSeparation(_))));
    }

    /// The composite table reproduces the Fourier forms written with
    /// q± = Λ±P − ikQ.
    #[test]
    fn composite_table_matches_fourier_forms() {
        for &k in &[0.0, 0.05, -0.4, 1.0, 3.5] {
            for &ns in &[0.0, 1.0, -2.0, 4.0] {
                let d = Dispersion::new(k, ns);
                let (l0, lp, lm) = (d.lambda0, d.lambda_plus, d.lambda_minus);
                let ins = C64::new(0.0, ns);
                let ik = C64::new(0.0, k);
                let s = ns * sigma(k);
                for &x in &[0.0, 0.7, 3.0] {
                    let eo = (lm * x).exp();
                    let eu = (-lp * x).exp();
                    let ep = (-k.abs() * x).exp();
                    let c = |side, src, tgt| symbol(KernelId::Composite(side, src, tgt), x, k, ns).unwrap();
                    // ω
                    assert!(close(c(Side::Down, Source::P, Target::Omega), -eo / l0 * lm, 1e-14));
                    assert!(close(c(Side::Down, Source::Q, Target::Omega), eo / l0 * ik, 1e-14));
                    assert!(close(c(Side::Up, Source::P, Target::Omega), -eu / l0 * lp, 1e-14));
                    assert!(close(c(Side::Up, Source::Q, Target::Omega), eu / l0 * ik, 1e-14));
                    if k == 0.0 && ns == 0.0 {
                        continue;
                    }
                    let (pf, pg, pfs, pgs) = if k == 0.0 {
                        (ZERO, ZERO, ZERO, ZERO)
                    } else {
                        (ik / (ik + s), C64::new(k.abs(), 0.0) / (ik + s), ik / (ik - s), C64::new(k.abs(), 0.0) / (ik - s))
                    };
                    // u
                    let du = -ik / l0 * eo / (lm + ins);
                    assert!(close(c(Side::Down, Source::P, Target::U), du * lm, 1e-13));
                    assert!(close(c(Side::Down, Source::Q, Target::U), -du * ik - pf * ep, 1e-13));
                    let uu = -ik / l0 * eu / (lp + ins);
                    assert!(close(c(Side::Up, Source::P, Target::U), uu * lp, 1e-13));
                    assert!(close(c(Side::Up, Source::Q, Target::U), -uu * ik + pfs * ep, 1e-13));
                    // v
                    let dv = -lm / l0 * eo / (lm + ins);
                    assert!(close(c(Side::Down, Source::P, Target::V), dv * lm, 1e-13));
                    assert!(close(c(Side::Down, Source::Q, Target::V), -dv * ik + pg * ep, 1e-13));
                    let uv = -lp / l0 * eu / (lp + ins);
                    assert!(close(c(Side::Up, Source::P, Target::V), uv * lp, 1e-13));
                    assert!(close(c(Side::Up, Source::Q, Target::V), -uv * ik + pgs * ep, 1e-13));
                }
            }
        }
    }
}

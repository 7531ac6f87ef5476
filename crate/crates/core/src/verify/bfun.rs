//! The k-integrals B_{μ,φ}, B_φ behind most kernel estimates, and their
//! envelopes.
//!
//!   B_{μ,φ}(x, nS) = ∫ |k|^φ |k/Λ₀|^{2μ} e^{2 Re Λ₋ x} dk,
//!   B_φ(x, nS)     = ∫ |k/Λ₀|^{2φ} |Λ₀|^{−2} e^{2 Re Λ₋ x} dk.

use super::quad::integrate_half_line;
use super::report::{bracket, frac, BoundCheck, Sample, VerifyReport};
use super::{VerifyConfig, QUAD_TOL};
use crate::error::Result;
use crate::kernels::{b, Dispersion};

pub fn b_mu_phi(mu: f64, phi: f64, x: f64, ns: f64) -> Result<f64> {
    let f = |k: f64| {
        let d = Dispersion::new(k, ns);
        let e = (2.0 * d.lambda_minus.re * x).exp();
        if e == 0.0 || k == 0.0 && (mu > 0.0 || phi > 0.0) {
            return 0.0;
        }
        k.powf(phi) * (k / d.lambda0.norm()).powf(2.0 * mu) * e
    };
    Ok(2.0 * integrate_half_line(&f, QUAD_TOL, 0.0)?)
}

pub fn b_phi(phi: f64, x: f64, ns: f64) -> Result<f64> {
    let f = |k: f64| {
        let d = Dispersion::new(k, ns);
        let e = (2.0 * d.lambda_minus.re * x).exp();
        let l = d.lambda0.norm();
        if e == 0.0 {
            return 0.0;
        }
        let r = if phi == 0.0 { 1.0 } else { (k / l).powf(2.0 * phi) };
        r / (l * l) * e
    };
    Ok(2.0 * integrate_half_line(&f, QUAD_TOL, 0.0)?)
}

fn sweep(
    cfg: &VerifyConfig,
    with_origin: bool,
    value: &dyn Fn(f64, f64) -> Result<f64>,
    envelope: &dyn Fn(f64, f64) -> f64,
) -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    for &n in &cfg.modes {
        let ns = n as f64 * cfg.strouhal;
        if with_origin {
            out.push(Sample::new(0.0, ns, value(0.0, ns)?, envelope(0.0, ns)));
        }
        for &x in &cfg.xs {
            out.push(Sample::new(x, ns, value(x, ns)?, envelope(x, ns)));
        }
    }
    Ok(out)
}

/// Lemma L2: B_{0,φ} ≤ C e^{bx}⟨x⟩^{(φ+1)/2}/x^{φ+1},
/// B_{μ,φ} ≤ C e^{bx}⟨x⟩^{φ/2}/x^{ξ₁+φ} (μ ≥ ½, 1 ≤ ξ₁ ≤ μ+½),
/// B_φ ≤ C e^{bx}/⟨x⟩^{½+φ}, with b = b(nS).
pub fn check_b_functions(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let mut rep = VerifyReport::default();
    for &phi in &[0.0, 0.5, 1.0, 2.0] {
        let s = sweep(
            cfg,
            false,
            &|x, ns| b_mu_phi(0.0, phi, x, ns),
            &|x, ns| (b(ns) * x).exp() * bracket(x).powf((phi + 1.0) / 2.0) / x.powf(phi + 1.0),
        )?;
        rep.bounds.push(BoundCheck::assess(
            "L2",
            format!("B_(0,{})", frac(phi)),
            format!("e^(b x) <x>^({}) x^({})", frac((phi + 1.0) / 2.0), frac(-phi - 1.0)),
            s,
        ));
    }
    for &mu in &[0.5, 1.0, 1.5] {
        for &phi in &[0.0, 1.0] {
            let mut xis = vec![1.0, mu + 0.5];
            xis.dedup();
            for xi in xis {
                let s = sweep(
                    cfg,
                    false,
                    &|x, ns| b_mu_phi(mu, phi, x, ns),
                    &|x, ns| (b(ns) * x).exp() * bracket(x).powf(phi / 2.0) / x.powf(xi + phi),
                )?;
                rep.bounds.push(BoundCheck::assess(
                    "L2",
                    format!("B_({},{}), xi1 = {}", frac(mu), frac(phi), frac(xi)),
                    format!("e^(b x) <x>^({}) x^({})", frac(phi / 2.0), frac(-xi - phi)),
                    s,
                ));
            }
        }
    }
    for &phi in &[0.0, 0.5, 1.0] {
        let s = sweep(
            cfg,
            true,
            &|x, ns| b_phi(phi, x, ns),
            &|x, ns| (b(ns) * x).exp() / bracket(x).powf(0.5 + phi),
        )?;
        rep.bounds.push(BoundCheck::assess(
            "L2",
            format!("B_{}", frac(phi)),
            format!("e^(b x) <x>^({})", frac(-0.5 - phi)),
            s,
        ));
    }
    // B_φ(0, nS) uniformly in nS: the sweep abscissa is |nS| here.
    for &phi in &[0.0, 1.0] {
        let mut s = Vec::new();
        for i in 0..25 {
            let ns = 1e-2 * 10f64.powf(5.0 * i as f64 / 24.0);
            s.push(Sample::new(ns, ns, b_phi(phi, 0.0, ns)?, 1.0));
        }
        s.push(Sample::new(0.0, 0.0, b_phi(phi, 0.0, 0.0)?, 1.0));
        rep.bounds.push(BoundCheck::assess("L2", format!("B_{}(0, nS) over nS in [0, 1e3]", frac(phi)), "1".into(), s));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn b00_at_zero_frequency_matches_closed_form_limits() {
        // n = 0: Re Λ₋ = (1 − √(1+4k²))/2 → B₀,₀(x,0) ≈ √(π/x) for large x
        // (heat limit e^{−2k²x}) and ≈ 2/(2x)·e^{x} for small x.
        let big = b_mu_phi(0.0, 0.0, 1e3, 0.0).unwrap();
        assert!((big / (PI / 2e3).sqrt() - 1.0).abs() < 2e-3, "{big}");
        let small = b_mu_phi(0.0, 0.0, 1e-3, 0.0).unwrap();
        assert!((small * 1e-3 - 1.0).abs() < 5e-3, "{small}");
    }

    #[test]
    fn b_phi_at_origin_is_finite_and_decreasing_in_ns() {
        let a = b_phi(0.0, 0.0, 0.0).unwrap();
        // ∫ dk / (1 + 4k²) = π/2.
        assert!((a - PI / 2.0).abs() < 1e-7, "{a}");
        let c = b_phi(0.0, 0.0, 10.0).unwrap();
        assert!(c.is_finite() && c < a);
    }

    #[test]
    fn sweep_passes_on_a_coarse_grid() {
        let cfg = VerifyConfig::coarse(1.0);
        let rep = check_b_functions(&cfg).unwrap();
        for b in &rep.bounds {
            assert!(b.pass, "{} {} C={} lo={} hi={}", b.quantity, b.envelope, b.fitted_c, b.slope_low, b.slope_high);
        }
    }
}

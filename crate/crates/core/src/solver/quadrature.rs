//! Exact product integration of e^{λ(x−x̃)} against a piecewise-linear
//! interpolant in x̃, and the power-law tail beyond the last station.

use num_complex::Complex64 as C64;

use crate::field::ZERO;

const SERIES_RADIUS: f64 = 0.5;

/// φ₁(z) = (e^z − 1)/z and ψ(z) = (e^z(z−1) + 1)/z², with Taylor series
/// near the origin: φ₁ = Σ z^m/(m+1)!, ψ = Σ z^m/(m!(m+2)).
pub fn phi1_psi(z: C64) -> (C64, C64) {
    if z.norm() < SERIES_RADIUS {
        let mut p1 = ZERO;
        let mut ps = ZERO;
        let mut zm = C64::new(1.0, 0.0); // z^m / m!
        for m in 0..24 {
            p1 += zm / (m as f64 + 1.0);
            ps += zm / (m as f64 + 2.0);
            zm = zm * z / (m as f64 + 1.0);
        }
        (p1, ps)
    } else {
        let e = z.exp();
        ((e - 1.0) / z, (e * (z - 1.0) + 1.0) / (z * z))
    }
}

/// Per-panel weights (e^z, hψ(z), h(φ₁−ψ)(z)) with z = rate·h.
#[derive(Debug, Clone, Copy)]
pub struct PanelWeights {
    pub decay: C64,
    pub near: C64,
    pub far: C64,
}

impl PanelWeights {
    pub fn new(rate: C64, h: f64) -> Self {
        let z = rate * h;
        let (p1, ps) = phi1_psi(z);
        PanelWeights { decay: z.exp(), near: ps * h, far: (p1 - ps) * h }
    }
}

/// A_i = ∫_{x₀}^{x_i} e^{λ(x_i − s)} g(s) ds with g linear on each panel.
/// `weights[i]` belongs to panel [x_i, x_{i+1}] with rate λ.
pub fn forward_accumulate(weights: &[PanelWeights], g: &[C64], out: &mut [C64]) {
    out[0] = ZERO;
    for i in 0..weights.len() {
        let w = &weights[i];
        out[i + 1] = w.decay * out[i] + w.near * g[i] + w.far * g[i + 1];
    }
}

/// B_i = ∫_{x_i}^∞ e^{−κ(s − x_i)} g(s) ds; the panel weights use rate −κ
/// and `terminal` is B at the last station.
pub fn backward_accumulate(weights: &[PanelWeights], g: &[C64], terminal: C64, out: &mut [C64]) {
    let n = g.len();
    out[n - 1] = terminal;
    for i in (0..weights.len()).rev() {
        let w = &weights[i];
        out[i] = w.decay * out[i + 1] + w.far * g[i] + w.near * g[i + 1];
    }
}

/// T(κ, α, X) = ∫₀^∞ e^{−κτ} (1 + τ/X)^{−α} dτ for Re κ ≥ 0 (α > 1 when κ = 0).
pub fn power_tail(kappa: C64, alpha: f64, x: f64) -> C64 {
    if kappa.norm() * x >= 30.0 {
        // Watson's lemma: Σ (−1)^j (α)_j / (X^j κ^{j+1}).
        let mut sum = ZERO;
        let mut term = 1.0 / kappa;
        let mut prev = f64::INFINITY;
        for j in 0..80 {
            let a = term.norm();
            if a > prev || a < 1e-18 * sum.norm() {
                break;
            }
            sum += term;
            prev = a;
            term = -term * (alpha + j as f64) / (x * kappa);
        }
        return sum;
    }
    // τ = X(e^t − 1): integrand X e^{(1−α)t − κX(e^t−1)} on t ∈ [0, t_max].
    let f = |t: f64| -> C64 { x * (C64::new((1.0 - alpha) * t, 0.0) - kappa * x * (t.exp() - 1.0)).exp() };
    let log_mag = |t: f64| (1.0 - alpha) * t - kappa.re * x * (t.exp() - 1.0);
    let mut t_max = 1.0;
    while log_mag(t_max) > -40.0 && t_max < 400.0 {
        t_max *= 1.25;
    }
    let n = 4000usize;
    let h = t_max / n as f64;
    let mut s = f(0.0) + f(t_max);
    for j in 1..n {
        s += f(j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Tail with the exponentially damped part beyond τ_w = −ln(tol)/Re κ
/// discarded.
pub fn windowed_power_tail(kappa: C64, alpha: f64, x: f64, window_tol: f64) -> C64 {
    let full = power_tail(kappa, alpha, x);
    if kappa.re <= 0.0 {
        return full;
    }
    let tw = -window_tol.ln() / kappa.re;
    let beyond = (-kappa * tw).exp() * ((x + tw) / x).powf(-alpha) * power_tail(kappa, alpha, x + tw);
    full - beyond
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn series_matches_closed_form_at_switch() {
        for &z in &[C64::new(0.49, 0.0), C64::new(-0.3, 0.35), C64::new(0.0, -0.499)] {
            let (a, b) = phi1_psi(z);
            let e = z.exp();
            assert!((a - (e - 1.0) / z).norm() < 1e-14);
            assert!((b - (e * (z - 1.0) + 1.0) / (z * z)).norm() < 1e-13);
        }
        let (a, b) = phi1_psi(ZERO);
        assert_eq!((a, b), (C64::new(1.0, 0.0), C64::new(0.5, 0.0)));
    }

    /// Exact for linear g: ∫₀^x e^{λ(x−s)} s ds = (e^{λx} − 1 − λx)/λ².
    #[test]
    fn forward_exact_for_linear_source() {
        let xs: Vec<f64> = (0..30).map(|i| 1.0 + (i as f64 * 0.2).powi(2)).collect();
        for &lam in &[C64::new(-0.7, 0.3), C64::new(-3.0, -1.0), C64::new(-1e-4, 0.0)] {
            let w: Vec<PanelWeights> = xs.windows(2).map(|p| PanelWeights::new(lam, p[1] - p[0])).collect();
            let g: Vec<C64> = xs.iter().map(|&s| C64::new(s - xs[0], 0.0)).collect();
            let mut out = vec![ZERO; xs.len()];
            forward_accumulate(&w, &g, &mut out);
            for (i, &x) in xs.iter().enumerate() {
                let d = x - xs[0];
                // d²·Σ z^m/(m+2)!, z = λd, avoids cancellation for small λ
                let z = lam * d;
                let closed = ((lam * d).exp() - 1.0 - lam * d) / (lam * lam);
                let mut want = ZERO;
                let mut term = C64::new(d * d / 2.0, 0.0);
                for m in 0..200 {
                    want += term;
                    term = term * z / (m as f64 + 3.0);
                }
                if z.norm() > 1.0 {
                    want = closed;
                }
                assert!((out[i] - want).norm() < 1e-10 * (1.0 + want.norm()), "{lam} {i}");
            }
        }
    }

    #[test]
    fn backward_with_exact_tail() {
        // g(s) = (s/X)^{-2} everywhere; B at x_0 vs direct quadrature.
        let xs: Vec<f64> = crate::params::log_stations(10.0, 100.0, 4000);
        let kappa = C64::new(1.3, 0.4);
        let x_last = 100.0;
        let g: Vec<C64> = xs.iter().map(|&s| C64::new((s / x_last).powi(-2), 0.0)).collect();
        let w: Vec<PanelWeights> = xs.windows(2).map(|p| PanelWeights::new(-kappa, p[1] - p[0])).collect();
        let mut out = vec![ZERO; xs.len()];
        backward_accumulate(&w, &g, power_tail(kappa, 2.0, x_last), &mut out);
        // reference by fine Simpson on [10, 400] + tail
        let f = |s: f64| (-kappa * (s - 10.0)).exp() * (s / x_last).powi(-2);
        let n = 200000;
        let h = 390.0 / n as f64;
        let mut r = f(10.0) + f(400.0);
        for j in 1..n {
            r += f(10.0 + j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 };
        }
        let r = r * h / 3.0;
        assert!((out[0] - r).norm() < 1e-6 * r.norm(), "{} {}", out[0], r);
    }

    #[test]
    fn tail_at_zero_rate() {
        let t = power_tail(ZERO, 1.5, 2000.0);
        assert!((t.re - 4000.0).abs() < 1e-6 * 4000.0, "{t}");
    }

    proptest! {
        #[test]
        fn tail_regimes_agree(kr in 0.005f64..0.05, ki in -0.02f64..0.02, alpha in 1.2f64..3.0) {
            // Both evaluation paths at the crossover |κ|X ≈ 30..100.
            let x = 2000.0;
            let k = C64::new(kr, ki);
            let series = power_tail(k, alpha, x);
            // force quadrature by evaluating at smaller X with rescaled κ
            let quad = {
                let f = |t: f64| -> C64 { x * (C64::new((1.0 - alpha) * t, 0.0) - k * x * (t.exp() - 1.0)).exp() };
                let n = 20000usize; let tm = 3.0; let h = tm / n as f64;
                let mut s = f(0.0) + f(tm);
                for j in 1..n { s += f(j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 }; }
                s * h / 3.0
            };
            prop_assume!(k.norm() * x >= 30.0);
            prop_assert!((series - quad).norm() < 1e-8 * quad.norm());
        }
    }
}

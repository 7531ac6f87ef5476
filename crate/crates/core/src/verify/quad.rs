//! Adaptive Gauss–Kronrod (7-point Gauss / 15-point Kronrod) quadrature.

use crate::error::{Result, WakeError};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 20_000;

/// One G7K15 panel on [a, b]: (Kronrod estimate, |Kronrod − Gauss|).
pub fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let d = h * XGK[i];
        let s = f(c - d) + f(c + d);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// ∫_a^b f by adaptive bisection of the panel with the largest error
/// estimate, until the summed estimate is below max(abs_tol, rel_tol·|I|).
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<f64> {
    let (v, e) = gk15(f, a, b);
    let mut panels = vec![(a, b, v, e)];
    loop {
        let total: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if !total.is_finite() || !err.is_finite() {
            return Err(WakeError::Quadrature(format!("non-finite integrand on [{a}, {b}]")));
        }
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        if panels.len() >= MAX_INTERVALS {
            return Err(WakeError::Quadrature(format!(
                "{MAX_INTERVALS} panels exhausted on [{a}, {b}] (estimate {total:.6e}, error {err:.3e})"
            )));
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap();
        let (pa, pb, _, _) = panels.swap_remove(worst);
        let m = 0.5 * (pa + pb);
        let (v1, e1) = gk15(f, pa, m);
        let (v2, e2) = gk15(f, m, pb);
        panels.push((pa, m, v1, e1));
        panels.push((m, pb, v2, e2));
    }
}

/// ∫_0^∞ f through the map k = t/(1−t).
pub fn integrate_half_line(f: &dyn Fn(f64) -> f64, rel_tol: f64, abs_tol: f64) -> Result<f64> {
    let g = |t: f64| {
        let s = 1.0 - t;
        let v = f(t / s);
        if v == 0.0 {
            0.0
        } else {
            v / (s * s)
        }
    };
    integrate(&g, 0.0, 1.0, rel_tol, abs_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact_on_one_panel() {
        let (v, _) = gk15(&|x: f64| x.powi(20), -1.0, 1.0);
        assert!((v - 2.0 / 21.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_half_line() {
        let v = integrate_half_line(&|k: f64| (-k * k).exp(), 1e-12, 0.0).unwrap();
        assert!((v - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn peaked_exponential() {
        // ∫_0^∞ e^{−k x} dk = 1/x for a narrow x-scale.
        for &x in &[1e-2, 1.0, 1e2] {
            let v = integrate_half_line(&|k: f64| (-k * x).exp(), 1e-10, 0.0).unwrap();
            assert!((v * x - 1.0).abs() < 1e-9, "x={x} v={v}");
        }
    }

    #[test]
    fn integrable_endpoint_singularity() {
        let v = integrate(&|t: f64| t.powf(-0.5), 0.0, 1.0, 1e-8, 0.0).unwrap();
        assert!((v - 2.0).abs() < 1e-7);
    }
}

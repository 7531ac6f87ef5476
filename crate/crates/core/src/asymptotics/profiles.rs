//! Universal profiles f_m (parabolic scale), g_m (linear scale) and h.

use libm::erf;
use std::f64::consts::PI;

/// f_m(z) = z^m e^{−z²/4}/√(4π).
pub fn f_m(m: i32, z: f64) -> f64 {
    z.powi(m) * (-z * z / 4.0).exp() / (4.0 * PI).sqrt()
}

pub fn f0(z: f64) -> f64 {
    f_m(0, z)
}

pub fn f1(z: f64) -> f64 {
    f_m(1, z)
}

/// g_m(z) = (1/π) z^m/(1+z²).
pub fn g_m(m: i32, z: f64) -> f64 {
    z.powi(m) / (PI * (1.0 + z * z))
}

pub fn g0(z: f64) -> f64 {
    g_m(0, z)
}

pub fn g1(z: f64) -> f64 {
    g_m(1, z)
}

/// h(z) = f₀(z)² + (1/(8√π)) z erf(z/2) e^{−z²/4}.
pub fn h(z: f64) -> f64 {
    f0(z).powi(2) + z * erf(z / 2.0) * (-z * z / 4.0).exp() / (8.0 * PI.sqrt())
}

/// Right-hand side of h'' + (y/2)h' + h = e^{−y²/2}/(4π).
pub fn h_forcing(y: f64) -> f64 {
    (-y * y / 2.0).exp() / (4.0 * PI)
}

/// Max |h'' + (y/2)h' + h − forcing| over [−a, a] using fourth-order
/// central differences with step `step`.
pub fn h_ode_residual(a: f64, step: f64) -> f64 {
    let n = (2.0 * a / step).round() as i64;
    let s = step;
    (0..=n)
        .map(|j| {
            let y = -a + j as f64 * s;
            let (m2, m1, c0, p1, p2) = (h(y - 2.0 * s), h(y - s), h(y), h(y + s), h(y + 2.0 * s));
            let d2 = (-p2 + 16.0 * p1 - 30.0 * c0 + 16.0 * m1 - m2) / (12.0 * s * s);
            let d1 = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * s);
            (d2 + 0.5 * y * d1 + c0 - h_forcing(y)).abs()
        })
        .fold(0.0, f64::max)
}

//! Dispersion relation Λ₀ = √(1 + 4(k² + inS)) and the decay envelopes b, c.

use num_complex::Complex64 as C64;

/// Λ₀, Λ₊ = (1+Λ₀)/2 and Λ₋ = (1−Λ₀)/2 at one (k, nS).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion {
    pub lambda0: C64,
    pub lambda_plus: C64,
    pub lambda_minus: C64,
}

impl Dispersion {
    pub fn new(k: f64, ns: f64) -> Self {
        let l0 = lambda0(k, ns);
        Dispersion { lambda0: l0, lambda_plus: 0.5 * (1.0 + l0), lambda_minus: 0.5 * (1.0 - l0) }
    }
}

/// Principal square root, Re Λ₀ ≥ 1.
pub fn lambda0(k: f64, ns: f64) -> C64 {
    C64::new(1.0 + 4.0 * k * k, 4.0 * ns).sqrt()
}

pub fn lambda_minus(k: f64, ns: f64) -> C64 {
    0.5 * (1.0 - lambda0(k, ns))
}

pub fn lambda_plus(k: f64, ns: f64) -> C64 {
    0.5 * (1.0 + lambda0(k, ns))
}

/// b(α) = ¼(1 − √((1 + √(1+16α²))/2)) = ½ Re Λ₋(0, α).
pub fn b(alpha: f64) -> f64 {
    0.25 * (1.0 - ((1.0 + (1.0 + 16.0 * alpha * alpha).sqrt()) / 2.0).sqrt())
}

/// c(α) = ½√((1 + √(1+16α²)) / (2 + 32α²)).
pub fn c(alpha: f64) -> f64 {
    0.5 * ((1.0 + (1.0 + 16.0 * alpha * alpha).sqrt()) / (2.0 + 32.0 * alpha * alpha)).sqrt()
}

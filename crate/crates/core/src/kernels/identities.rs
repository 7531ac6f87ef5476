//! Exact symbol identities between kernels, sampled on an (x, k, n) lattice.

use num_complex::Complex64 as C64;

use super::dispersion::Dispersion;
use super::symbols::{symbol, KernelId};

/// Largest relative defect of each identity family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    /// K₂ = ∂_y(K₁ + 2K₈ + 2K₁₀), all n.
    pub k2_decomposition: f64,
    /// ∂_x K₁₂ = −∂_y K₂ at n = 0.
    pub dx_k12: f64,
    /// K₂ = 2∂_y K₈ + ∂_y K₁ at n = 0.
    pub k2_stationary: f64,
    /// K₁₂ = −K₁ − K₈ at n = 0.
    pub k12_stationary: f64,
    /// K₁ + K₈ + K₁₀ = (Λ₊/Λ₀) e^{Λ₋x}.
    pub k1_k8_k10: f64,
}

impl IdentityReport {
    pub fn max(&self) -> f64 {
        [self.k2_decomposition, self.dx_k12, self.k2_stationary, self.k12_stationary, self.k1_k8_k10]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

fn rel(a: C64, b: C64) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}

pub const SAMPLE_X: [f64; 6] = [0.0, 0.01, 0.5, 1.0, 5.0, 30.0];
pub const SAMPLE_K: [f64; 9] = [-8.0, -2.0, -0.5, -0.01, 0.0, 0.01, 1.0, 2.0, 8.0];
pub const SAMPLE_NS: [f64; 7] = [-10.0, -2.0, -0.5, 0.0, 0.5, 2.0, 10.0];

pub fn composite_symbol_identities() -> IdentityReport {
    let mut r = IdentityReport { k2_decomposition: 0.0, dx_k12: 0.0, k2_stationary: 0.0, k12_stationary: 0.0, k1_k8_k10: 0.0 };
    let s = |id, x, k, ns| symbol(id, x, k, ns).expect("x >= 0");
    for &x in &SAMPLE_X {
        for &k in &SAMPLE_K {
            let dy = C64::new(0.0, -k);
            for &ns in &SAMPLE_NS {
                let d = Dispersion::new(k, ns);
                let sum = s(KernelId::K1, x, k, ns) + 2.0 * s(KernelId::K8, x, k, ns) + 2.0 * s(KernelId::K10, x, k, ns);
                r.k2_decomposition = r.k2_decomposition.max(rel(s(KernelId::K2, x, k, ns), dy * sum));
                let lhs = s(KernelId::K1, x, k, ns) + s(KernelId::K8, x, k, ns) + s(KernelId::K10, x, k, ns);
                r.k1_k8_k10 = r.k1_k8_k10.max(rel(lhs, d.lambda_plus / d.lambda0 * (d.lambda_minus * x).exp()));
            }
            let d = Dispersion::new(k, 0.0);
            // ∂_x acts on e^{Λ₋x} as multiplication by Λ₋.
            let dx_k12 = d.lambda_minus * s(KernelId::K12, x, k, 0.0);
            r.dx_k12 = r.dx_k12.max(rel(dx_k12, -dy * s(KernelId::K2, x, k, 0.0)));
            let rhs = dy * (2.0 * s(KernelId::K8, x, k, 0.0) + s(KernelId::K1, x, k, 0.0));
            r.k2_stationary = r.k2_stationary.max(rel(s(KernelId::K2, x, k, 0.0), rhs));
            let rhs = -s(KernelId::K1, x, k, 0.0) - s(KernelId::K8, x, k, 0.0);
            r.k12_stationary = r.k12_stationary.max(rel(s(KernelId::K12, x, k, 0.0), rhs));
        }
    }
    r
}

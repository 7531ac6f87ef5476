//! Numerical checks of the kernel estimates.
//!
//! Every estimate is a boundedness statement with a non-computable
//! constant, so each check samples the quantity over a sweep in x (and in
//! the temporal frequency nS), divides by the asserted envelope, and
//! reports the fitted constant C = max ratio.  A check passes when the
//! ratio shows no trend at either end of the sweep (see
//! [`report::TREND_TOL`]); a wrong exponent shows up as a trend.

pub mod bfun;
pub mod lops;
pub mod norms;
pub mod physical;
pub mod quad;
pub mod report;

pub use bfun::check_b_functions;
pub use lops::check_l_operators;
pub use norms::{check_heat_limits, check_kernel_norms, heat_table, kernel_table, FieldSpec, Modes, NormSpec};
pub use report::{BoundCheck, ExactCheck, Sample, VerifyReport, TREND_TOL};

use crate::error::{Result, WakeError};
use crate::kernels::KernelId;

/// Relative tolerance of every k-quadrature.
pub const QUAD_TOL: f64 = 1e-8;

/// Sweep over separations x and temporal modes n (frequencies nS).
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub strouhal: f64,
    pub xs: Vec<f64>,
    pub modes: Vec<i32>,
}

impl VerifyConfig {
    /// x ∈ [10⁻², 10²] at 40 log-spaced points, n ∈ {0, ±1, ±2, ±5}.
    pub fn new(strouhal: f64) -> Self {
        VerifyConfig { strouhal, xs: log_space(1e-2, 1e2, 40), modes: vec![0, 1, -1, 2, -2, 5, -5] }
    }

    /// A cheaper sweep over the same range (for unit tests).
    pub fn coarse(strouhal: f64) -> Self {
        VerifyConfig { strouhal, xs: log_space(1e-2, 1e2, 17), modes: vec![0, 1, -2] }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.strouhal.is_finite() && self.strouhal != 0.0) {
            return Err(WakeError::InvalidParam(format!("verification needs a non-zero Strouhal number, got {}", self.strouhal)));
        }
        if self.xs.len() < 3 || self.xs.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(WakeError::InvalidParam("verification sweep needs at least 3 positive x values".into()));
        }
        Ok(())
    }
}

pub fn log_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a * (b / a).powf(i as f64 / (n - 1) as f64)).collect()
}

/// The whole suite: B-functions, every kernel-norm row (and ‖K₀‖₁ = 1),
/// heat limits and moment expansions, and the multipliers L₁, L₂.
pub fn verify_all(cfg: &VerifyConfig, seed: u64) -> Result<VerifyReport> {
    cfg.validate()?;
    let mut rep = check_b_functions(cfg)?;
    rep.merge(check_kernel_norms(cfg, &KernelId::ELEMENTARY));
    rep.merge(check_heat_limits(cfg));
    rep.merge(check_l_operators(cfg, seed));
    Ok(rep)
}

//! Error type shared by every module.

use thiserror::Error;

/// Coarse classification used by drivers to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Invalid configuration values.
    Config,
    /// An input violated an operation's precondition.
    Precondition,
    /// An iteration or fit failed to converge.
    Convergence,
}

#[derive(Debug, Error)]
pub enum WakeError {
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("restriction violated: {0}")]
    Restriction(String),
    #[error("non-zero mean {mean:.3e} exceeds tolerance {tol:.3e}")]
    NonZeroMean { mean: f64, tol: f64 },
    #[error("negative separation {0}")]
    NegativeSeparation(f64),
    #[error("field not resolved: edge magnitude {edge:.3e} exceeds {tol:.3e}")]
    Unresolved { edge: f64, tol: f64 },
    #[error("tail fit failed: {0}")]
    TailFit(String),
    #[error("non-finite values in {0}")]
    NonFinite(&'static str),
    #[error("iteration not contractive at sweep {sweep}: ratios {ratios:?}")]
    NonContractive { sweep: usize, ratios: Vec<f64> },
    #[error("no convergence after {sweeps} sweeps (last increment {increment:.3e})")]
    MaxSweeps { sweeps: usize, increment: f64 },
    #[error("boundary fit did not converge: {0}")]
    FitDivergence(String),
    #[error("insufficient range: {0}")]
    InsufficientRange(String),
    #[error("quadrature failure: {0}")]
    Quadrature(String),
}

impl WakeError {
    pub fn class(&self) -> ErrorClass {
        match self {
            WakeError::InvalidParam(_) | WakeError::Restriction(_) => ErrorClass::Config,
            WakeError::NonContractive { .. }
            | WakeError::MaxSweeps { .. }
            | WakeError::FitDivergence(_)
            | WakeError::TailFit(_)
            | WakeError::Quadrature(_) => ErrorClass::Convergence,
            _ => ErrorClass::Precondition,
        }
    }
}

pub type Result<T> = std::result::Result<T, WakeError>;

//! Spectral solver and verification harness for the time-periodic 2D
//! Navier–Stokes wake in a downstream half-plane.
//!
//! Fields are stored as Fourier coefficients in y (convention
//! f̂(k) = ∫ e^{iky} f dy, so ∂_y ↦ −ik) for every retained temporal mode
//! n ∈ [−Nt, Nt] and every x-station.  The flow is obtained as the fixed
//! point of a Duhamel integral map; the asymptotic coefficients a₁…a₆ are
//! extracted from the converged state and compared against the far-field
//! expansion.

pub mod asymptotics;
pub mod error;
pub mod field;
pub mod fit;
pub mod grid;
pub mod kernels;
pub mod nonlinear;
pub mod norms;
pub mod ops;
pub mod params;
pub mod solver;
pub mod verify;

pub use error::{ErrorClass, Result, WakeError};
pub use field::{FieldLabel, Slice, SpectralField};
pub use grid::Grid;
pub use params::Params;
pub use asymptotics::AsymptoticCoeffs;
pub use solver::{BoundaryData, FlowState};

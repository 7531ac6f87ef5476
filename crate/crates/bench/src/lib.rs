//! Shared fixtures for the benchmarks.

use wake_core::solver::{make_boundary, Family};
use wake_core::{BoundaryData, Grid, Params};

/// Reference parameters with the given resolution.
pub fn params(ny: usize, nt: usize, nx: usize) -> Params {
    let strouhal = if nt == 0 { 0.0 } else { Params::reference().strouhal };
    Params { ny, nt, nx, strouhal, ..Params::reference() }
}

/// Parameters, grid and seeded gaussian-wake boundary data at the
/// reference amplitude.
pub fn setup(ny: usize, nt: usize, nx: usize) -> (Params, Grid, BoundaryData) {
    let p = params(ny, nt, nx);
    let g = Grid::new(&p).expect("valid grid");
    let b = make_boundary(&p, &g, Family::GaussianWake, 0.01, 1).expect("valid boundary data");
    (p, g, b)
}

//! Picard iteration state ← F(state) from the initial guess F(0, 0).

use super::duhamel::{DuhamelMap, DuhamelOutput};
use super::state::{BoundaryData, FlowState};
use crate::error::{Result, WakeError};
use crate::grid::Grid;
use crate::params::Params;

/// Consecutive sweeps with increment ratio above one that signal
/// non-contraction.
pub const NON_CONTRACTIVE_RUN: usize = 3;

/// Solve to `params.picard_tol` and return the converged state together
/// with the last Duhamel output (for the upstream integrals at x₀).
pub fn picard_solve_full(params: &Params, grid: &Grid, boundary: &BoundaryData) -> Result<DuhamelOutput> {
    params.validate()?;
    boundary.validate(params, grid)?;
    picard_iterate(params, grid, boundary, params.max_sweeps, None)
}

pub fn picard_solve(params: &Params, grid: &Grid, boundary: &BoundaryData) -> Result<FlowState> {
    Ok(picard_solve_full(params, grid, boundary)?.state)
}

/// Core loop.  `observer` sees every iterate (used by parity checks).
pub fn picard_iterate(
    params: &Params,
    grid: &Grid,
    boundary: &BoundaryData,
    max_sweeps: usize,
    mut observer: Option<&mut dyn FnMut(usize, &FlowState)>,
) -> Result<DuhamelOutput> {
    let map = DuhamelMap::new(params, grid, boundary)?;
    let nx = grid.stations().len();
    let mut state = FlowState::zeros(nx, params.nt, grid.ny());
    let mut meta = state.meta.clone();
    let mut theta = 1.0;
    let mut above = 0usize;
    for sweep in 1..=max_sweeps {
        let out = map.apply(&state)?;
        let mut next = out.state.clone();
        if theta < 1.0 {
            next = state.blend(&next, theta);
        }
        let inc = next.diff(&state).sup_norm(params, grid)?;
        if !inc.is_finite() {
            meta.increments.push(inc);
            return Err(WakeError::NonContractive { sweep, ratios: meta.ratios });
        }
        if let Some(&prev) = meta.increments.last() {
            let r = if prev > 0.0 { inc / prev } else { 0.0 };
            meta.ratios.push(r);
            above = if r > 1.0 { above + 1 } else { 0 };
        }
        meta.increments.push(inc);
        meta.sweeps = sweep;
        meta.tail_alpha_p = out.alpha_p;
        meta.tail_alpha_q = out.alpha_q;
        state = next;
        if let Some(obs) = observer.as_mut() {
            obs(sweep, &state);
        }
        if !params.nonlinear || inc < params.picard_tol {
            meta.relaxation = theta;
            state.meta = meta;
            return Ok(DuhamelOutput { state, ..out });
        }
        if above >= NON_CONTRACTIVE_RUN {
            if params.relaxation < 1.0 && theta == 1.0 {
                theta = params.relaxation;
                above = 0;
            } else {
                return Err(WakeError::NonContractive { sweep, ratios: meta.ratios });
            }
        }
    }
    Err(WakeError::MaxSweeps { sweeps: max_sweeps, increment: *meta.increments.last().unwrap_or(&f64::NAN) })
}

//! Boundary data and flow-state containers.

use crate::error::{Result, WakeError};
use crate::field::{FieldLabel, Slice, SpectralField};
use crate::grid::Grid;
use crate::norms::{composite_norm, lp_norm, NormReport};
use crate::ops::hilbert;
use crate::params::Params;

/// Parameters (w, ν) of the center-stable manifold at x₀ and μ = Hν.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    pub w: Slice,
    pub nu: Slice,
    pub mu: Slice,
}

impl BoundaryData {
    pub fn new(grid: &Grid, w: Slice, nu: Slice) -> Self {
        let mu = hilbert(grid, &nu);
        BoundaryData { w, nu, mu }
    }

    pub fn zeros(nt: usize, ny: usize) -> Self {
        let z = Slice::zeros(nt, ny);
        BoundaryData { w: z.clone(), nu: z.clone(), mu: z }
    }

    pub fn scale(&self, s: f64) -> Self {
        BoundaryData { w: self.w.scale(s), nu: self.nu.scale(s), mu: self.mu.scale(s) }
    }

    /// |M(P₀w)| relative to ‖P₀w‖₁.
    pub fn mean_defect(&self, grid: &Grid) -> Result<f64> {
        let l1 = lp_norm(&grid.inverse(self.w.mode(0))?, 1.0, grid.dy());
        let m = self.w.mode(0)[0].norm();
        Ok(if l1 == 0.0 { 0.0 } else { m / l1 })
    }

    /// ‖(ν, μ, w)‖_{x₀}.
    pub fn norm(&self, params: &Params, grid: &Grid) -> Result<NormReport> {
        composite_norm(params, grid, &self.nu, &self.mu, &self.w, params.x0)
    }

    /// Check the class-C_i condition, μ = Hν and the radius bound.
    pub fn validate(&self, params: &Params, grid: &Grid) -> Result<()> {
        for s in [&self.w, &self.nu, &self.mu] {
            if s.ny() != grid.ny() || s.nt() != params.nt {
                return Err(WakeError::SizeMismatch { expected: grid.ny(), got: s.ny() });
            }
            if !s.is_finite() {
                return Err(WakeError::NonFinite("boundary data"));
            }
        }
        let d = self.mean_defect(grid)?;
        if d > params.mean_tol {
            return Err(WakeError::NonZeroMean { mean: d, tol: params.mean_tol });
        }
        if (&self.mu - &hilbert(grid, &self.nu)).max_abs() > 1e-14 * (1.0 + self.nu.max_abs()) {
            return Err(WakeError::InvalidParam("mu must equal H nu".into()));
        }
        let n = self.norm(params, grid)?.total();
        if n > params.rho * (1.0 + 1e-12) {
            return Err(WakeError::InvalidParam(format!(
                "boundary norm {n:.4e} exceeds rho = {:.4e}",
                params.rho
            )));
        }
        Ok(())
    }
}

/// Iteration diagnostics recorded by the Picard solver.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterationMeta {
    pub sweeps: usize,
    /// sup_x ‖state_{j+1} − state_j‖_x per sweep.
    pub increments: Vec<f64>,
    /// Successive increment ratios.
    pub ratios: Vec<f64>,
    /// Under-relaxation factor in effect at the end (1 = plain iteration).
    pub relaxation: f64,
    /// Tail exponents used beyond the last station for P and Q.
    pub tail_alpha_p: f64,
    pub tail_alpha_q: f64,
}

/// (u, v, ω) at every station.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub u: SpectralField,
    pub v: SpectralField,
    pub w: SpectralField,
    pub meta: IterationMeta,
}

impl FlowState {
    pub fn zeros(nx: usize, nt: usize, ny: usize) -> Self {
        FlowState {
            u: SpectralField::zeros(FieldLabel::U, nx, nt, ny),
            v: SpectralField::zeros(FieldLabel::V, nx, nt, ny),
            w: SpectralField::zeros(FieldLabel::Omega, nx, nt, ny),
            meta: IterationMeta { relaxation: 1.0, ..Default::default() },
        }
    }

    pub fn nx(&self) -> usize {
        self.u.slices.len()
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite() && self.w.is_finite()
    }

    /// Composite norm at every station.
    pub fn norms(&self, params: &Params, grid: &Grid) -> Result<Vec<NormReport>> {
        use rayon::prelude::*;
        let x = grid.stations();
        (0..self.nx())
            .into_par_iter()
            .map(|i| composite_norm(params, grid, &self.u.slices[i], &self.v.slices[i], &self.w.slices[i], x[i]))
            .collect()
    }

    /// sup over stations of the composite norm.
    pub fn sup_norm(&self, params: &Params, grid: &Grid) -> Result<f64> {
        Ok(self.norms(params, grid)?.iter().map(NormReport::total).fold(0.0, f64::max))
    }

    /// Station-wise difference (metadata of `self` kept).
    pub fn diff(&self, other: &FlowState) -> FlowState {
        let d = |a: &SpectralField, b: &SpectralField| SpectralField {
            label: a.label,
            slices: a.slices.iter().zip(&b.slices).map(|(x, y)| x - y).collect(),
        };
        FlowState { u: d(&self.u, &other.u), v: d(&self.v, &other.v), w: d(&self.w, &other.w), meta: self.meta.clone() }
    }

    /// Every field multiplied by `s`.
    pub fn scale(&self, s: f64) -> FlowState {
        let f = |a: &SpectralField| SpectralField { label: a.label, slices: a.slices.iter().map(|x| x.scale(s)).collect() };
        FlowState { u: f(&self.u), v: f(&self.v), w: f(&self.w), meta: self.meta.clone() }
    }

    /// (1−θ)·self + θ·other.
    pub fn blend(&self, other: &FlowState, theta: f64) -> FlowState {
        let b = |a: &SpectralField, c: &SpectralField| SpectralField {
            label: a.label,
            slices: a.slices.iter().zip(&c.slices).map(|(x, y)| &x.scale(1.0 - theta) + &y.scale(theta)).collect(),
        };
        FlowState { u: b(&self.u, &other.u), v: b(&self.v, &other.v), w: b(&self.w, &other.w), meta: other.meta.clone() }
    }
}

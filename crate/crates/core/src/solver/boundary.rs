//! Boundary-data determination from traces (u_b, v_b, ω_b) at x₀, and
//! synthetic boundary-data families.

use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::picard::picard_solve_full;
use super::state::BoundaryData;
use crate::asymptotics::profiles::{f_m, g0};
use crate::error::{Result, WakeError};
use crate::field::Slice;
use crate::grid::Grid;
use crate::kernels::multipliers::{multiplier_l, Multiplier};
use crate::nonlinear::{compute_quads, Quads};
use crate::norms::lp_norm;
use crate::ops::hilbert;
use crate::params::Params;

/// Relative tolerance on M(P₀w) for fitted data before the mean is
/// projected away (the traces carry the Picard tolerance of the run that
/// produced them).
pub const FIT_MEAN_TOL: f64 = 1e-6;
/// Outer-loop stopping threshold on the relative change of (ν, w).
pub const FIT_TOL: f64 = 1e-11;
pub const FIT_MAX_OUTER: usize = 60;

/// Fitted boundary data and the defect of the unused v-relation.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub boundary: BoundaryData,
    /// max|v_b − (L_v w + μ + F₂,v − L₁R − L₂S)(x₀)| / max|v_b|.
    pub residual: f64,
    pub iterations: usize,
    /// |M(P₀w)|/‖P₀w‖₁ before projection.
    pub mean_defect: f64,
}

/// Subtract M(P₀w) times a unit-mass Gaussian of width √x₀ from the n = 0 mode.
fn project_mean(grid: &Grid, x0: f64, w: &mut Slice) -> Result<f64> {
    let l1 = lp_norm(&grid.inverse(w.mode(0))?, 1.0, grid.dy());
    let mean = w.mode(0)[0];
    if mean.norm() == 0.0 {
        return Ok(0.0);
    }
    let sx = x0.sqrt();
    let bump: Vec<f64> = grid.y().iter().map(|&y| f_m(0, y / sx) / sx).collect();
    let b = grid.forward_real(&bump)?;
    let scale = mean / b[0];
    for (c, bb) in w.mode_mut(0).iter_mut().zip(&b) {
        *c -= scale * bb;
    }
    w.mode_mut(0)[0] = C64::new(0.0, 0.0);
    Ok(mean.norm() / l1)
}

fn local_u(grid: &Grid, params: &Params, q: &Quads) -> Result<Slice> {
    let l1s = multiplier_l(grid, Multiplier::L1, params.strouhal, params.mean_tol, &q.s)?;
    let l2r = multiplier_l(grid, Multiplier::L2, params.strouhal, params.mean_tol, &q.r)?;
    Ok(&l1s - &l2r)
}

fn local_v(grid: &Grid, params: &Params, q: &Quads) -> Result<Slice> {
    let l1r = multiplier_l(grid, Multiplier::L1, params.strouhal, params.mean_tol, &q.r)?;
    let l2s = multiplier_l(grid, Multiplier::L2, params.strouhal, params.mean_tol, &q.s)?;
    Ok(&l1r.scale(-1.0) - &l2s)
}

/// Determine (ν, w) from traces at x₀ by the outer fixed-point loop.
pub fn boundary_fit(params: &Params, grid: &Grid, ub: &Slice, vb: &Slice, wb: &Slice) -> Result<FitResult> {
    params.validate()?;
    let (nt, ny) = (params.nt, grid.ny());
    for s in [ub, vb, wb] {
        if s.nt() != nt || s.ny() != ny {
            return Err(WakeError::SizeMismatch { expected: ny, got: s.ny() });
        }
    }
    let mut upstream = [Slice::zeros(nt, ny), Slice::zeros(nt, ny), Slice::zeros(nt, ny)];
    let mut quads0 = Quads::zeros(nt, ny);
    let mut prev: Option<BoundaryData> = None;
    let mut mean_defect;
    for it in 1..=FIT_MAX_OUTER {
        let mut w = wb - &upstream[2];
        mean_defect = project_mean(grid, params.x0, &mut w)?;
        let lu_w = multiplier_l(grid, Multiplier::Lu, params.strouhal, params.mean_tol, &w)?;
        let nu = &(&(ub - &lu_w) - &upstream[0]) - &local_u(grid, params, &quads0)?;
        let bd = BoundaryData { mu: hilbert(grid, &nu), w, nu };
        let out = picard_solve_full(params, grid, &bd)?;
        upstream = out.upstream_at_x0.clone();
        quads0 = if params.nonlinear {
            compute_quads(grid, &out.state.u.slices[0], &out.state.v.slices[0], &out.state.w.slices[0])?
        } else {
            Quads::zeros(nt, ny)
        };
        let change = match &prev {
            None => f64::INFINITY,
            Some(p) => {
                let scale = bd.w.max_abs().max(bd.nu.max_abs());
                let d = (&bd.w - &p.w).max_abs().max((&bd.nu - &p.nu).max_abs());
                if scale == 0.0 {
                    0.0
                } else {
                    d / scale
                }
            }
        };
        let done = change < FIT_TOL || (bd.w.max_abs() == 0.0 && bd.nu.max_abs() == 0.0) || !params.nonlinear && it > 1;
        prev = Some(bd);
        if done {
            if mean_defect > FIT_MEAN_TOL {
                return Err(WakeError::NonZeroMean { mean: mean_defect, tol: FIT_MEAN_TOL });
            }
            let bd = prev.expect("set above");
            let lv_w = multiplier_l(grid, Multiplier::Lv, params.strouhal, params.mean_tol, &bd.w)?;
            let pred = &(&(&lv_w + &bd.mu) + &upstream[1]) + &local_v(grid, params, &quads0)?;
            let scale = vb.max_abs();
            let res = (vb - &pred).max_abs();
            let residual = if scale == 0.0 { res } else { res / scale };
            return Ok(FitResult { boundary: bd, residual, iterations: it, mean_defect });
        }
    }
    Err(WakeError::FitDivergence(format!("no convergence in {FIT_MAX_OUTER} outer iterations")))
}

/// Synthetic boundary-data families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Heat-scale profiles of both parities.
    GaussianWake,
    /// w odd, ν even in y (symmetric wake).
    SymmetricWake,
    /// Heat-scale profiles plus a Poisson-scale component in ν.
    PrLike,
}

impl FromStr for Family {
    type Err = WakeError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian-wake" => Ok(Family::GaussianWake),
            "symmetric-wake" => Ok(Family::SymmetricWake),
            "pr-like" => Ok(Family::PrLike),
            other => Err(WakeError::InvalidParam(format!("unknown boundary family '{other}'"))),
        }
    }
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::GaussianWake => "gaussian-wake",
            Family::SymmetricWake => "symmetric-wake",
            Family::PrLike => "pr-like",
        }
    }
}

/// Relative size of the random perturbations.
const PERTURBATION: f64 = 0.1;
/// Relative size of the time-periodic modes.
const PERIODIC: f64 = 0.3;

/// Build boundary data with profile w ∝ f₁(y/√x₀)/√x₀ and ν ∝ f₀(y/√x₀)
/// plus random Hermite-type perturbations f_j(y/√x₀), j ≤ 5, and
/// time-periodic modes. The result is scaled so that the peak of the
/// time-averaged streamwise trace, sup_y |P₀ν|, equals `amplitude`.
pub fn make_boundary(params: &Params, grid: &Grid, family: Family, amplitude: f64, seed: u64) -> Result<BoundaryData> {
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(WakeError::InvalidParam("amplitude must be >= 0".into()));
    }
    let (nt, ny) = (params.nt, grid.ny());
    if amplitude == 0.0 {
        return Ok(BoundaryData::zeros(nt, ny));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x0 = params.x0;
    let sx = x0.sqrt();
    let z: Vec<f64> = grid.y().iter().map(|&y| y / sx).collect();
    let profile = |coef: &[f64; 6], extra: &dyn Fn(f64, f64) -> f64| -> Vec<f64> {
        z.iter()
            .zip(grid.y())
            .map(|(&zz, &y)| (0..6).map(|j| coef[j] * f_m(j as i32, zz)).sum::<f64>() + extra(zz, y))
            .collect()
    };
    let parity_ok = |j: usize, odd: bool| family != Family::SymmetricWake || (j % 2 == 1) == odd;
    let draw = |base: usize, odd: bool, rng: &mut ChaCha8Rng| -> [f64; 6] {
        let mut c = [0.0; 6];
        for (j, cj) in c.iter_mut().enumerate() {
            let r: f64 = rng.gen_range(-1.0..1.0);
            if parity_ok(j, odd) {
                *cj = PERTURBATION * r;
            }
        }
        c[base] += 1.0;
        c
    };
    let mut w = Slice::zeros(nt, ny);
    let mut nu = Slice::zeros(nt, ny);
    let none = |_: f64, _: f64| 0.0;
    let poisson = |_: f64, y: f64| 0.5 * g0(y / x0);
    for n in 0..=nt as i64 {
        let (cw, cn) = (draw(1, true, &mut rng), draw(0, false, &mut rng));
        let extra: &dyn Fn(f64, f64) -> f64 = if family == Family::PrLike { &poisson } else { &none };
        let wv: Vec<f64> = profile(&cw, &none).iter().map(|v| v / sx).collect();
        let nv: Vec<f64> = profile(&cn, extra).to_vec();
        let (wc, nc) = (grid.forward_real(&wv)?, grid.forward_real(&nv)?);
        if n == 0 {
            w.mode_mut(0).copy_from_slice(&wc);
            nu.mode_mut(0).copy_from_slice(&nc);
        } else {
            let phase = C64::from_polar(PERIODIC, rng.gen_range(0.0..std::f64::consts::TAU));
            for m in 0..ny {
                w.mode_mut(n)[m] = phase * wc[m];
                nu.mode_mut(n)[m] = phase * nc[m];
                let mneg = grid.neg_index(m);
                w.mode_mut(-n)[mneg] = (phase * wc[m]).conj();
                nu.mode_mut(-n)[mneg] = (phase * nc[m]).conj();
            }
        }
    }
    // Exact symmetries: odd/even projections remove round-off asymmetry.
    if family == Family::SymmetricWake {
        let refl_w = crate::ops::reflect(grid, &w);
        let refl_n = crate::ops::reflect(grid, &nu);
        w = (&w - &refl_w).scale(0.5);
        nu = (&nu + &refl_n).scale(0.5);
    }
    project_mean(grid, x0, &mut w)?;
    let unit = BoundaryData::new(grid, w, nu);
    let peak = grid.inverse(unit.nu.mode(0))?.iter().fold(0.0f64, |a, c| a.max(c.norm()));
    Ok(unit.scale(amplitude / peak))
}

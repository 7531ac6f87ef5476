//! Quadratic terms R = uv, S = (v²−u²)/2, P = uω, Q = vω formed
//! pseudo-spectrally with 3/2-rule dealiasing in y and in the temporal
//! modes, plus their moments and the x-integral of M(P₀Q).

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Result, WakeError};
use crate::field::{Slice, ZERO};
use crate::fit::linear_fit;
use crate::grid::Grid;

/// Above this many retained modes per side the temporal convolution goes
/// through a padded FFT instead of a direct sum.
pub const DIRECT_NT_MAX: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Quads {
    pub r: Slice,
    pub s: Slice,
    pub p: Slice,
    pub q: Slice,
}

impl Quads {
    pub fn zeros(nt: usize, ny: usize) -> Self {
        let z = Slice::zeros(nt, ny);
        Quads { r: z.clone(), s: z.clone(), p: z.clone(), q: z }
    }
}

/// Mode-resolved values on the padded y-grid.
struct PaddedField(Vec<Vec<C64>>);

fn to_padded(grid: &Grid, f: &Slice) -> Result<PaddedField> {
    Ok(PaddedField(f.mode_numbers().map(|n| grid.inverse_padded(f.mode(n))).collect::<Result<_>>()?))
}

fn from_padded(grid: &Grid, modes: &[Vec<C64>]) -> Result<Slice> {
    Slice::from_modes(modes.iter().map(|m| grid.forward_padded(m)).collect::<Result<_>>()?)
}

/// Temporal convolution engine for products of mode-resolved fields.
pub enum TemporalProduct {
    Direct,
    Padded { mt: usize, fwd: Arc<dyn Fft<f64>>, inv: Arc<dyn Fft<f64>> },
}

impl TemporalProduct {
    pub fn for_nt(nt: usize) -> Self {
        if nt <= DIRECT_NT_MAX {
            TemporalProduct::Direct
        } else {
            Self::padded(nt)
        }
    }

    pub fn padded(nt: usize) -> Self {
        let mt = 3 * nt + 1;
        let mut planner = FftPlanner::new();
        TemporalProduct::Padded { mt, fwd: planner.plan_fft_forward(mt), inv: planner.plan_fft_inverse(mt) }
    }

    /// Truncated convolution c_n = Σ_{n₁+n₂=n} a_{n₁} b_{n₂}, |n| ≤ Nt,
    /// pointwise in y.
    fn product(&self, a: &[Vec<C64>], b: &[Vec<C64>]) -> Vec<Vec<C64>> {
        let nm = a.len();
        let nt = (nm / 2) as i64;
        let len = a[0].len();
        match self {
            TemporalProduct::Direct => {
                let mut out = vec![vec![ZERO; len]; nm];
                for n in -nt..=nt {
                    let o = &mut out[(n + nt) as usize];
                    for n1 in (-nt).max(n - nt)..=nt.min(n + nt) {
                        let (x, y) = (&a[(n1 + nt) as usize], &b[(n - n1 + nt) as usize]);
                        for j in 0..len {
                            o[j] += x[j] * y[j];
                        }
                    }
                }
                out
            }
            TemporalProduct::Padded { mt, fwd, inv } => {
                let mt = *mt;
                // t-values: f(t_j) = Σ_n f_n e^{2πi n j/mt}
                let to_t = |f: &[Vec<C64>], j: usize| -> Vec<C64> {
                    let mut buf = vec![ZERO; mt];
                    for n in -nt..=nt {
                        buf[n.rem_euclid(mt as i64) as usize] = f[(n + nt) as usize][j];
                    }
                    inv.process(&mut buf);
                    buf
                };
                let mut out = vec![vec![ZERO; len]; nm];
                for j in 0..len {
                    let ta = to_t(a, j);
                    let tb = to_t(b, j);
                    let mut prod: Vec<C64> = ta.iter().zip(&tb).map(|(x, y)| x * y).collect();
                    fwd.process(&mut prod);
                    for n in -nt..=nt {
                        out[(n + nt) as usize][j] = prod[n.rem_euclid(mt as i64) as usize] / mt as f64;
                    }
                }
                out
            }
        }
    }
}

/// Dealiased product a·b of two slices.
pub fn product(grid: &Grid, a: &Slice, b: &Slice) -> Result<Slice> {
    let tp = TemporalProduct::for_nt(a.nt());
    let pa = to_padded(grid, a)?;
    let pb = to_padded(grid, b)?;
    from_padded(grid, &tp.product(&pa.0, &pb.0))
}

/// R, S, P, Q at one station.
pub fn compute_quads(grid: &Grid, u: &Slice, v: &Slice, w: &Slice) -> Result<Quads> {
    compute_quads_with(grid, &TemporalProduct::for_nt(u.nt()), u, v, w)
}

pub fn compute_quads_with(grid: &Grid, tp: &TemporalProduct, u: &Slice, v: &Slice, w: &Slice) -> Result<Quads> {
    let pu = to_padded(grid, u)?;
    let pv = to_padded(grid, v)?;
    let pw = to_padded(grid, w)?;
    let r = tp.product(&pu.0, &pv.0);
    let uu = tp.product(&pu.0, &pu.0);
    let vv = tp.product(&pv.0, &pv.0);
    let s: Vec<Vec<C64>> = vv
        .iter()
        .zip(&uu)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| 0.5 * (x - y)).collect())
        .collect();
    let p = tp.product(&pu.0, &pw.0);
    let q = tp.product(&pv.0, &pw.0);
    Ok(Quads {
        r: from_padded(grid, &r)?,
        s: from_padded(grid, &s)?,
        p: from_padded(grid, &p)?,
        q: from_padded(grid, &q)?,
    })
}

/// Quads at every station (parallel over stations).
pub fn compute_quads_all(grid: &Grid, u: &[Slice], v: &[Slice], w: &[Slice]) -> Result<Vec<Quads>> {
    let nt = u.first().map_or(0, Slice::nt);
    let tp = TemporalProduct::for_nt(nt);
    (0..u.len()).into_par_iter().map(|i| compute_quads_with(grid, &tp, &u[i], &v[i], &w[i])).collect()
}

/// Moments of the n = 0 mode of a field at one station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    /// M(P₀f) = f̂₀(0).
    pub mean: C64,
    /// M(y P₀f) = −i ∂_k f̂₀(0) (three-point stencil).
    pub first: C64,
    /// ∫|y|^γ |P₀f| for γ = 1, 2.
    pub abs_moments: [f64; 2],
}

/// Moments of P₀f; fails with `Unresolved` when |f| at the domain edge
/// exceeds `edge_tol` times its maximum.
pub fn moments(grid: &Grid, f: &Slice, edge_tol: f64) -> Result<Moments> {
    let c = f.mode(0);
    let vals = grid.inverse(c)?;
    let max = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let edge = vals[0].norm().max(vals[vals.len() - 1].norm());
    if max > 0.0 && edge > edge_tol * max {
        return Err(WakeError::Unresolved { edge: edge / max, tol: edge_tol });
    }
    let dk = grid.k()[1];
    let deriv = (c[1] - c[grid.ny() - 1]) / (2.0 * dk);
    let dy = grid.dy();
    let am = |g: i32| grid.y().iter().zip(&vals).map(|(y, v)| y.abs().powi(g) * v.norm()).sum::<f64>() * dy;
    Ok(Moments { mean: c[0], first: C64::new(0.0, -1.0) * deriv, abs_moments: [am(1), am(2)] })
}

/// Cumulative x-integral of M(P₀Q) with a power-law tail beyond the last station.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeQ {
    /// ∫_{x₀}^{x_i} M(P₀Q) dx at each station.
    pub cumulative: Vec<f64>,
    /// ∫_{Xmax}^∞ from the fitted tail.
    pub tail: f64,
    /// Fitted decay exponent of |M(P₀Q)| (NaN when Q ≡ 0).
    pub alpha: f64,
    /// ∫∫_{Ω₊} P₀Q.
    pub total: f64,
    /// −M(P₀S(x₀)), the boundary form of the same quantity.
    pub boundary_form: f64,
}

impl CumulativeQ {
    /// |total − boundary_form| / max(|total|, |boundary_form|).
    pub fn consistency(&self) -> f64 {
        let s = self.total.abs().max(self.boundary_form.abs());
        if s == 0.0 {
            0.0
        } else {
            (self.total - self.boundary_form).abs() / s
        }
    }
}

/// Fit |g| ~ C x^{−α} over the last decade of stations.  Returns `None`
/// when g vanishes identically there.
pub fn tail_exponent(stations: &[f64], g: &[f64]) -> Result<Option<f64>> {
    let xn = *stations.last().expect("non-empty stations");
    let idx: Vec<usize> = (0..stations.len()).filter(|&i| stations[i] >= xn / 10.0).collect();
    if idx.iter().all(|&i| g[i] == 0.0) {
        return Ok(None);
    }
    if idx.len() < 3 {
        return Err(WakeError::TailFit("fewer than three stations in the last decade".into()));
    }
    let sign = g[idx[0]].signum();
    if idx.iter().any(|&i| g[i] == 0.0 || g[i].signum() != sign) {
        return Err(WakeError::TailFit("sign change in the tail".into()));
    }
    if idx.windows(2).any(|w| g[w[1]].abs() > g[w[0]].abs()) {
        return Err(WakeError::TailFit("non-monotone tail".into()));
    }
    let lx: Vec<f64> = idx.iter().map(|&i| stations[i].ln()).collect();
    let lg: Vec<f64> = idx.iter().map(|&i| g[i].abs().ln()).collect();
    Ok(Some(-linear_fit(&lx, &lg).slope))
}

pub fn cumulative_q_integral(grid: &Grid, quads: &[Quads]) -> Result<CumulativeQ> {
    let x = grid.stations();
    let mq: Vec<f64> = quads.iter().map(|q| q.q.mode(0)[0].re).collect();
    let mut cumulative = vec![0.0; x.len()];
    for i in 1..x.len() {
        cumulative[i] = cumulative[i - 1] + 0.5 * (x[i] - x[i - 1]) * (mq[i] + mq[i - 1]);
    }
    let (alpha, tail) = match tail_exponent(x, &mq)? {
        None => (f64::NAN, 0.0),
        Some(a) if a <= 1.0 => {
            return Err(WakeError::TailFit(format!("tail exponent {a:.3} <= 1: integral diverges")));
        }
        Some(a) => (a, mq[mq.len() - 1] * x[x.len() - 1] / (a - 1.0)),
    };
    let total = cumulative[x.len() - 1] + tail;
    let boundary_form = -quads[0].s.mode(0)[0].re;
    Ok(CumulativeQ { cumulative, tail, alpha, total, boundary_form })
}

/// Relative defects ‖P − (∂ₓR + ∂_yS)‖_∞ and ‖Q − (−∂_yR + ∂ₓS)‖_∞ of the
/// n = 0 coefficients over interior stations (∂ₓ by second-order
/// non-uniform central differences).
pub fn decomposition_defects(grid: &Grid, quads: &[Quads]) -> (f64, f64) {
    let x = grid.stations();
    let dy = |f: &Slice| crate::ops::derivative(grid, f);
    let mut dp: f64 = 0.0;
    let mut dq: f64 = 0.0;
    let (mut sp, mut sq): (f64, f64) = (0.0, 0.0);
    for i in 1..x.len().saturating_sub(1) {
        let (h1, h2) = (x[i] - x[i - 1], x[i + 1] - x[i]);
        let dx = |a: &Slice, b: &Slice, c: &Slice| -> Slice {
            let wa = -h2 / (h1 * (h1 + h2));
            let wb = (h2 - h1) / (h1 * h2);
            let wc = h1 / (h2 * (h1 + h2));
            &(&a.scale(wa) + &b.scale(wb)) + &c.scale(wc)
        };
        let dxr = dx(&quads[i - 1].r, &quads[i].r, &quads[i + 1].r);
        let dxs = dx(&quads[i - 1].s, &quads[i].s, &quads[i + 1].s);
        let rp = &quads[i].p - &(&dxr + &dy(&quads[i].s));
        let rq = &(&quads[i].q + &dy(&quads[i].r)) - &dxs;
        dp = dp.max(rp.max_abs());
        dq = dq.max(rq.max_abs());
        sp = sp.max(quads[i].p.max_abs());
        sq = sq.max(quads[i].q.max_abs());
    }
    let rel = |d: f64, s: f64| if s == 0.0 { 0.0 } else { d / s };
    (rel(dp, sp), rel(dq, sq))
}

//! The Duhamel map (v, ω) ↦ F(v, ω): linear evolution of the boundary data,
//! local quadratic terms, and the downstream (∫_{x₀}^x) and upstream
//! (∫_x^∞) integrals of P and Q against the composite kernels.
//!
//! Each composite kernel is Σ coef(k,n) e^{rate·s}, so for every (n, k) the
//! x-integrals reduce to first-order recursions over the stations with
//! exact weights for a piecewise-linear source (see [`quadrature`]).

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::quadrature::{backward_accumulate, forward_accumulate, power_tail, windowed_power_tail, PanelWeights};
use super::state::{BoundaryData, FlowState};
use crate::error::{Result, WakeError};
use crate::field::{Slice, ZERO};
use crate::grid::Grid;
use crate::kernels::dispersion::Dispersion;
use crate::kernels::multipliers::{multiplier_l, multiplier_symbol, Multiplier};
use crate::kernels::symbols::{terms_with, KernelId, Rate, Side, Source, Target, Term};
use crate::nonlinear::{compute_quads_all, tail_exponent, Quads};
use crate::params::Params;

/// Default tail exponents for ‖P‖ and ‖Q‖ beyond the last station, used
/// when a fit over the last decade is unavailable.
pub fn prior_tail_exponents(params: &Params) -> (f64, f64) {
    (1.0, 1.5 - params.phi)
}

const TARGETS: [Target; 3] = [Target::U, Target::V, Target::Omega];

/// Coefficients of every composite kernel at one (k, nS), split by rate.
#[derive(Debug, Clone, Copy)]
struct Coefs {
    down_p: [C64; 3],
    down_q: [C64; 3],
    down_q_poisson: [C64; 3],
    up_p: [C64; 3],
    up_q: [C64; 3],
    up_q_poisson: [C64; 3],
}

fn coef_of(terms: &[Term], rate: Rate) -> C64 {
    terms.iter().filter(|t| t.rate == rate).map(|t| t.coef).sum()
}

impl Coefs {
    fn new(k: f64, ns: f64, d: &Dispersion) -> Self {
        let mut c = Coefs {
            down_p: [ZERO; 3],
            down_q: [ZERO; 3],
            down_q_poisson: [ZERO; 3],
            up_p: [ZERO; 3],
            up_q: [ZERO; 3],
            up_q_poisson: [ZERO; 3],
        };
        for (j, &t) in TARGETS.iter().enumerate() {
            let tm = |side, src| terms_with(KernelId::Composite(side, src, t), k, ns, d);
            c.down_p[j] = coef_of(&tm(Side::Down, Source::P), Rate::Oseen);
            let dq = tm(Side::Down, Source::Q);
            c.down_q[j] = coef_of(&dq, Rate::Oseen);
            c.down_q_poisson[j] = coef_of(&dq, Rate::Poisson);
            c.up_p[j] = coef_of(&tm(Side::Up, Source::P), Rate::Upstream);
            let uq = tm(Side::Up, Source::Q);
            c.up_q[j] = coef_of(&uq, Rate::Upstream);
            c.up_q_poisson[j] = coef_of(&uq, Rate::Poisson);
        }
        c
    }
}

/// Result of one application of the map.
#[derive(Debug, Clone)]
pub struct DuhamelOutput {
    pub state: FlowState,
    /// Upstream integrals F₂,u, F₂,v, F₂,ω evaluated at x₀.
    pub upstream_at_x0: [Slice; 3],
    pub alpha_p: f64,
    pub alpha_q: f64,
}

/// The map F for fixed boundary data.
pub struct DuhamelMap<'a> {
    params: &'a Params,
    grid: &'a Grid,
    boundary: &'a BoundaryData,
    lu_w: Slice,
    lv_w: Slice,
}

struct Column {
    u: Vec<C64>,
    v: Vec<C64>,
    w: Vec<C64>,
    upstream: [C64; 3],
}

impl<'a> DuhamelMap<'a> {
    pub fn new(params: &'a Params, grid: &'a Grid, boundary: &'a BoundaryData) -> Result<Self> {
        if grid.stations().first() != Some(&params.x0) {
            return Err(WakeError::InvalidParam("first station must equal x0".into()));
        }
        let lu_w = multiplier_l(grid, Multiplier::Lu, params.strouhal, params.mean_tol, &boundary.w)?;
        let lv_w = multiplier_l(grid, Multiplier::Lv, params.strouhal, params.mean_tol, &boundary.w)?;
        Ok(DuhamelMap { params, grid, boundary, lu_w, lv_w })
    }

    /// Tail exponents fitted to Σ_n sup_k |ĉ_n(k)| (a lower bound for the L¹
    /// norm) over the last decade of stations, falling back to the priors.
    fn tail_exponents(&self, quads: &[Quads]) -> (f64, f64) {
        let (pp, pq) = prior_tail_exponents(self.params);
        let norm = |s: &Slice| -> f64 {
            s.mode_numbers().map(|n| s.mode(n).iter().map(|c| c.norm()).fold(0.0, f64::max)).sum()
        };
        let x = self.grid.stations();
        let fit = |g: Vec<f64>, prior: f64, min: f64| match tail_exponent(x, &g) {
            Ok(Some(a)) if a.is_finite() && a > min => a,
            _ => prior,
        };
        let ap = fit(quads.iter().map(|q| norm(&q.p)).collect(), pp, 0.0);
        let aq = fit(quads.iter().map(|q| norm(&q.q)).collect(), pq, 1.05);
        (ap, aq)
    }

    fn column(&self, n: i64, m: usize, quads: Option<(&[Quads], f64, f64)>) -> Column {
        let grid = self.grid;
        let x = grid.stations();
        let nx = x.len();
        let k = grid.k()[m];
        let ns = n as f64 * self.params.strouhal;
        let d = Dispersion::new(k, ns);
        let x0 = x[0];
        let (wh, luw, lvw) = (self.boundary.w.mode(n)[m], self.lu_w.mode(n)[m], self.lv_w.mode(n)[m]);
        let (nuh, muh) = (self.boundary.nu.mode(n)[m], self.boundary.mu.mode(n)[m]);
        let mut col = Column { u: vec![ZERO; nx], v: vec![ZERO; nx], w: vec![ZERO; nx], upstream: [ZERO; 3] };
        for i in 0..nx {
            let s = x[i] - x0;
            let eo = (d.lambda_minus * s).exp();
            let ep = (-k.abs() * s).exp();
            col.w[i] = eo * wh;
            col.u[i] = eo * luw + ep * nuh;
            col.v[i] = eo * lvw + ep * muh;
        }
        let Some((quads, alpha_p, alpha_q)) = quads else {
            return col;
        };
        let gp: Vec<C64> = quads.iter().map(|q| q.p.mode(n)[m]).collect();
        let gq: Vec<C64> = quads.iter().map(|q| q.q.mode(n)[m]).collect();
        let c = Coefs::new(k, ns, &d);
        let panels = |rate: C64| -> Vec<PanelWeights> {
            x.windows(2).map(|p| PanelWeights::new(rate, p[1] - p[0])).collect()
        };
        let w_os = panels(d.lambda_minus);
        let w_up = panels(-d.lambda_plus);
        let w_po = panels(C64::new(-k.abs(), 0.0));
        let xl = x[nx - 1];
        let wt = self.params.window_tol;
        let mut a_p = vec![ZERO; nx];
        let mut a_q = vec![ZERO; nx];
        let mut a_qp = vec![ZERO; nx];
        let mut b_p = vec![ZERO; nx];
        let mut b_q = vec![ZERO; nx];
        let mut b_qp = vec![ZERO; nx];
        forward_accumulate(&w_os, &gp, &mut a_p);
        forward_accumulate(&w_os, &gq, &mut a_q);
        forward_accumulate(&w_po, &gq, &mut a_qp);
        let t_up_p = windowed_power_tail(d.lambda_plus, alpha_p, xl, wt);
        let t_up_q = windowed_power_tail(d.lambda_plus, alpha_q, xl, wt);
        let t_po_q = power_tail(C64::new(k.abs(), 0.0), alpha_q, xl);
        backward_accumulate(&w_up, &gp, gp[nx - 1] * t_up_p, &mut b_p);
        backward_accumulate(&w_up, &gq, gq[nx - 1] * t_up_q, &mut b_q);
        backward_accumulate(&w_po, &gq, gq[nx - 1] * t_po_q, &mut b_qp);
        let l1 = multiplier_symbol(Multiplier::L1, k, ns).expect("regular");
        let l2 = multiplier_symbol(Multiplier::L2, k, ns).expect("regular");
        for i in 0..nx {
            let mut down = [ZERO; 3];
            let mut up = [ZERO; 3];
            for j in 0..3 {
                down[j] = c.down_p[j] * a_p[i] + c.down_q[j] * a_q[i] + c.down_q_poisson[j] * a_qp[i];
                up[j] = c.up_p[j] * b_p[i] + c.up_q[j] * b_q[i] + c.up_q_poisson[j] * b_qp[i];
            }
            let (r, s) = (quads[i].r.mode(n)[m], quads[i].s.mode(n)[m]);
            col.u[i] += down[0] + up[0] + l1 * s - l2 * r;
            col.v[i] += down[1] + up[1] - l1 * r - l2 * s;
            col.w[i] += down[2] + up[2];
            if i == 0 {
                col.upstream = up;
            }
        }
        col
    }

    /// F applied with precomputed quadratic terms (`None` = linear evolution).
    pub fn apply_quads(&self, quads: Option<&[Quads]>) -> Result<DuhamelOutput> {
        let grid = self.grid;
        let nt = self.params.nt;
        let ny = grid.ny();
        let nx = grid.stations().len();
        let (alpha_p, alpha_q) = match quads {
            Some(q) => self.tail_exponents(q),
            None => (f64::NAN, f64::NAN),
        };
        let nyq = grid.nyquist();
        let ntl = nt as i64;
        let cols: Vec<(i64, usize, Column)> = (-ntl..=ntl)
            .flat_map(|n| (0..ny).map(move |m| (n, m)))
            .collect::<Vec<_>>()
            .into_par_iter()
            .filter(|&(_, m)| m != nyq)
            .map(|(n, m)| (n, m, self.column(n, m, quads.map(|q| (q, alpha_p, alpha_q)))))
            .collect();
        let mut state = FlowState::zeros(nx, nt, ny);
        let mut upstream = [Slice::zeros(nt, ny), Slice::zeros(nt, ny), Slice::zeros(nt, ny)];
        for (n, m, c) in cols {
            for i in 0..nx {
                state.u.slices[i].mode_mut(n)[m] = c.u[i];
                state.v.slices[i].mode_mut(n)[m] = c.v[i];
                state.w.slices[i].mode_mut(n)[m] = c.w[i];
            }
            for j in 0..3 {
                upstream[j].mode_mut(n)[m] = c.upstream[j];
            }
        }
        if !state.is_finite() {
            return Err(WakeError::NonFinite("Duhamel map output"));
        }
        state.meta.tail_alpha_p = alpha_p;
        state.meta.tail_alpha_q = alpha_q;
        Ok(DuhamelOutput { state, upstream_at_x0: upstream, alpha_p, alpha_q })
    }

    /// F(state).  With `params.nonlinear = false` the quadratic terms are
    /// dropped and the result is the linear evolution.
    pub fn apply(&self, state: &FlowState) -> Result<DuhamelOutput> {
        if !self.params.nonlinear {
            return self.apply_quads(None);
        }
        let quads = compute_quads_all(self.grid, &state.u.slices, &state.v.slices, &state.w.slices)?;
        self.apply_quads(Some(&quads))
    }
}

/// duhamel_map(boundary, state).
pub fn duhamel_map(params: &Params, grid: &Grid, boundary: &BoundaryData, state: &FlowState) -> Result<FlowState> {
    boundary.validate(params, grid)?;
    Ok(DuhamelMap::new(params, grid, boundary)?.apply(state)?.state)
}


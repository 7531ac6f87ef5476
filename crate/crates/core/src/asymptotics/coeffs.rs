//! Extraction of the asymptotic coefficients from a converged state and
//! its boundary data, and the near-locality diagnostic for ã₁(x).

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::fields::{asymptotic_fields, AsymptoticCoeffs};
use crate::error::{Result, WakeError};
use crate::field::{Slice, ZERO};
use crate::grid::Grid;
use crate::nonlinear::{compute_quads_all, cumulative_q_integral, tail_exponent, CumulativeQ, Quads};
use crate::ops::{first_moment_quadrature, op_i_mode};
use crate::params::Params;
use crate::solver::quadrature::{backward_accumulate, power_tail, PanelWeights};
use crate::solver::{BoundaryData, FlowState};

/// Explicit pieces of a₄ (their sum is the diagnostic value).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct A4Pieces {
    /// M(y I P₀w) from the linear evolution of the boundary vorticity.
    pub linear: f64,
    /// −M(P₀R(x₀)) = −∫ P₀(uv)(x₀, y) dy.
    pub boundary: f64,
    /// −∫_{x₀}^∞ M(y P₀(Q − Q_a)) dx, Q_a built from the leading fields.
    pub q_moment: f64,
    /// a₁ · P₀a₃ · ln x₀.
    pub log: f64,
}

impl A4Pieces {
    pub fn sum(&self) -> f64 {
        self.linear + self.boundary + self.q_moment + self.log
    }
}

/// Everything `extract_coeffs` measures.  `coeffs.a4` is the fitted value.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffReport {
    pub coeffs: AsymptoticCoeffs,
    pub a4_pieces: A4Pieces,
    /// Least-squares a₄ (mean over stations in [4x₀, Xmax]); NaN when no
    /// station lies in that range.
    pub a4_fit: f64,
    /// Relative spread (max deviation / |mean|) of the per-station a₄ fits.
    pub a4_fit_spread: f64,
    /// ∫∫_{Ω₊} P₀Q with its boundary form −M(P₀S(x₀)).
    pub q_integral: CumulativeQ,
    /// a₁ + 2 P₀a₂ (zero for the full exterior problem; reported only).
    pub mass_relation: f64,
    /// (drag, lift) = (2 P₀a₂, −2 P₀a₃).
    pub force: (f64, f64),
    /// max_{n≠0} |a₂,ₙ| / |P₀a₂| and the same for a₃ (0 when P₀a = 0 and
    /// all n ≠ 0 modes vanish).
    pub time_variation: (f64, f64),
}

/// Mean of the n = 0 mode as a real number.
fn mean0(f: &Slice) -> f64 {
    f.mode(0)[0].re
}

/// ∫ y P₀f dy.
fn first_moment0(grid: &Grid, f: &Slice) -> Result<f64> {
    Ok(first_moment_quadrature(grid, f.mode(0))?.re)
}

/// lim_{k→0⁺} of the even part (f̂(k) + f̂(−k))/2 by two-point Richardson
/// extrapolation on the first two wavenumbers.
fn even_limit(grid: &Grid, c: &[C64]) -> C64 {
    let e = |m: usize| 0.5 * (c[m] + c[grid.neg_index(m)]);
    2.0 * e(1) - e(2)
}

/// ∫_{x_i}^∞ e^{−(x̃−x_i)} g(x̃) dx̃ at every station for a scalar sequence,
/// with a power-law continuation beyond the last station.
fn exp_backward(x: &[f64], g: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let alpha = match tail_exponent(x, g) {
        Ok(Some(a)) if a.is_finite() && a >= 0.0 => a,
        _ => 1.0,
    };
    let one = C64::new(1.0, 0.0);
    let w: Vec<PanelWeights> = x.windows(2).map(|p| PanelWeights::new(-one, p[1] - p[0])).collect();
    let gc: Vec<C64> = g.iter().map(|&v| C64::new(v, 0.0)).collect();
    let mut out = vec![ZERO; n];
    backward_accumulate(&w, &gc, gc[n - 1] * power_tail(one, alpha, x[n - 1]), &mut out);
    out.iter().map(|c| c.re).collect()
}

/// ∫_{x₀}^∞ g dx by the trapezoid rule plus a fitted power tail (no tail
/// when the fit fails or the exponent is ≤ 1).
fn integral_with_tail(x: &[f64], g: &[f64]) -> f64 {
    let body: f64 = x.windows(2).zip(g.windows(2)).map(|(p, v)| 0.5 * (p[1] - p[0]) * (v[0] + v[1])).sum();
    let tail = match tail_exponent(x, g) {
        Ok(Some(a)) if a > 1.0 => g[g.len() - 1] * x[x.len() - 1] / (a - 1.0),
        _ => 0.0,
    };
    body + tail
}

/// Stations with x ≥ 4x₀ (the asymptotic fit range).
pub fn fit_stations(grid: &Grid) -> Vec<usize> {
    let x = grid.stations();
    (0..x.len()).filter(|&i| x[i] >= 4.0 * x[0]).collect()
}

/// Extract a = (a₁, a₂(t), a₃(t), a₄, a₁², a₁P₀a₃) from the boundary data
/// and the converged state, with the diagnostics of [`CoeffReport`].
pub fn extract_coeffs(params: &Params, grid: &Grid, boundary: &BoundaryData, state: &FlowState) -> Result<CoeffReport> {
    boundary.validate(params, grid)?;
    let x = grid.stations();
    if state.nx() != x.len() {
        return Err(WakeError::SizeMismatch { expected: x.len(), got: state.nx() });
    }
    let nt = params.nt;
    let quads = state_quads(params, grid, state)?;
    let qi = cumulative_q_integral(grid, &quads)?;

    // a₁ = −M(I P₀w) + ∫∫P₀Q, with M(I f) = −∫ y f.
    let iw = op_i_mode(grid, boundary.w.mode(0), params.mean_tol)?;
    let a1 = -iw[0].re + qi.total;
    let a2: Vec<C64> = boundary
        .nu
        .mode_numbers()
        .map(|n| boundary.nu.mode(n)[0] - if n == 0 { C64::new(qi.total, 0.0) } else { ZERO })
        .collect();
    let a3: Vec<C64> = boundary.mu.mode_numbers().map(|n| even_limit(grid, boundary.mu.mode(n))).collect();
    let base = AsymptoticCoeffs::new(a1, a2, a3, 0.0);

    // Explicit a₄ pieces.
    let linear = first_moment_quadrature(grid, &iw)?.re;
    let boundary_piece = -mean0(&quads[0].r);
    let leading = base.leading();
    let qa = asymptotic_quads(grid, &leading, x, nt)?;
    let dq_moment: Vec<f64> = quads
        .par_iter()
        .zip(&qa)
        .map(|(q, a)| first_moment0(grid, &(&q.q - &a.q)))
        .collect::<Result<_>>()?;
    let pieces = A4Pieces {
        linear,
        boundary: boundary_piece,
        q_moment: -integral_with_tail(x, &dq_moment),
        log: a1 * base.a3_mode(0).re * x[0].ln(),
    };

    // Least-squares a₄ against φ = −f₁(y/√x)/(2x) on the n = 0 mode.
    let idx = fit_stations(grid);
    let fits: Vec<f64> = idx
        .par_iter()
        .map(|&i| fit_a4_at(grid, &base, &state.u.slices[i], x[i], nt))
        .collect::<Result<_>>()?;
    let (a4_fit, a4_fit_spread) = if fits.is_empty() {
        (f64::NAN, f64::NAN)
    } else {
        let mean = fits.iter().sum::<f64>() / fits.len() as f64;
        let dev = fits.iter().map(|f| (f - mean).abs()).fold(0.0, f64::max);
        (mean, if mean == 0.0 { if dev == 0.0 { 0.0 } else { f64::INFINITY } } else { dev / mean.abs() })
    };
    let a4 = if a4_fit.is_finite() { a4_fit } else { pieces.sum() };
    let coeffs = base.with_a4(a4);

    let rel = |v: &[C64]| -> f64 {
        let c = v[nt].norm();
        let m = v.iter().enumerate().filter(|(j, _)| *j != nt).map(|(_, z)| z.norm()).fold(0.0, f64::max);
        if m == 0.0 {
            0.0
        } else {
            m / c
        }
    };
    Ok(CoeffReport {
        mass_relation: a1 + 2.0 * coeffs.a2_mode(0).re,
        force: (2.0 * coeffs.a2_mode(0).re, -2.0 * coeffs.a3_mode(0).re),
        time_variation: (rel(&coeffs.a2), rel(&coeffs.a3)),
        coeffs,
        a4_pieces: pieces,
        a4_fit,
        a4_fit_spread,
        q_integral: qi,
    })
}

/// Quadratic terms of the state, or zeros when the nonlinearity is off (the
/// solver then drops them, so they are not part of the flow's balance).
fn state_quads(params: &Params, grid: &Grid, state: &FlowState) -> Result<Vec<Quads>> {
    if params.nonlinear {
        compute_quads_all(grid, &state.u.slices, &state.v.slices, &state.w.slices)
    } else {
        Ok(vec![Quads::zeros(params.nt, grid.ny()); state.nx()])
    }
}

/// Quadratic terms of the asymptotic fields at every station.
fn asymptotic_quads(grid: &Grid, c: &AsymptoticCoeffs, x: &[f64], nt: usize) -> Result<Vec<Quads>> {
    let fields: Vec<[Slice; 3]> = x.par_iter().map(|&xi| asymptotic_fields(grid, c, xi, nt)).collect::<Result<_>>()?;
    let (mut u, mut v, mut w) = (Vec::new(), Vec::new(), Vec::new());
    for [a, b, c] in fields {
        u.push(a);
        v.push(b);
        w.push(c);
    }
    compute_quads_all(grid, &u, &v, &w)
}

/// ⟨r, φ⟩/⟨φ, φ⟩ for r = P₀u − u_a(a₄ = 0) and φ = −f₁(y/√x)/(2x), taken
/// over the Fourier coefficients (Parseval).
fn fit_a4_at(grid: &Grid, base: &AsymptoticCoeffs, u: &Slice, x: f64, nt: usize) -> Result<f64> {
    let [ua, _, _] = asymptotic_fields(grid, base, x, nt)?;
    let k = grid.k();
    let nyq = grid.nyquist();
    let (mut num, mut den) = (0.0, 0.0);
    for m in 0..grid.ny() {
        if m == nyq {
            continue;
        }
        let phi = -0.5 * C64::new(0.0, 2.0 * k[m]) * (-k[m] * k[m] * x).exp();
        let r = u.mode(0)[m] - ua.mode(0)[m];
        num += (r * phi.conj()).re;
        den += phi.norm_sqr();
    }
    Ok(if den == 0.0 { 0.0 } else { num / den })
}

/// Per-station ã₁(x) in its two equivalent forms.
#[derive(Debug, Clone, PartialEq)]
pub struct A1Diagnostic {
    pub x: Vec<f64>,
    /// M(I(P₀ω + ∫ₓ^∞ e^{x−x̃}P₀P)) + ∫ₓ^∞ (e^{x−x̃} − 1) M(P₀Q).
    pub a1_tilde: Vec<f64>,
    /// Same with −∫ₓ^∞ M(P₀Q) replaced by M(P₀S(x)).
    pub a1_tilde_s: Vec<f64>,
    pub mean: f64,
    /// max_i |ã₁(x_i) − mean| / |mean|.
    pub relative_variation: f64,
    /// max_i |ã₁ − ã₁ˢ| / |mean|.
    pub cross_form_defect: f64,
    /// max_i |M(P₀ω + ∫ e^{x−x̃}P₀P)| relative to ∫|y||P₀ω|: I is applied
    /// through the first moment, which assumes this mean vanishes.
    pub mean_defect: f64,
}

impl A1Diagnostic {
    /// a₁ + mean ã₁ (zero when both forms agree with the extraction).
    pub fn sum_with(&self, a1: f64) -> f64 {
        a1 + self.mean
    }
}

pub fn a1_diagnostic(params: &Params, grid: &Grid, state: &FlowState) -> Result<A1Diagnostic> {
    let x = grid.stations().to_vec();
    if state.nx() != x.len() {
        return Err(WakeError::SizeMismatch { expected: x.len(), got: state.nx() });
    }
    let quads = state_quads(params, grid, state)?;
    let nx = x.len();
    let per: Vec<(f64, f64, f64, f64, f64, f64)> = (0..nx)
        .into_par_iter()
        .map(|i| -> Result<_> {
            let w = &state.w.slices[i];
            let q = &quads[i];
            let abs1: f64 = {
                let vals = grid.inverse(w.mode(0))?;
                grid.y().iter().zip(&vals).map(|(y, v)| y.abs() * v.norm()).sum::<f64>() * grid.dy()
            };
            Ok((
                first_moment0(grid, w)?,
                first_moment0(grid, &q.p)?,
                mean0(w),
                mean0(&q.p),
                mean0(&q.s),
                abs1,
            ))
        })
        .collect::<Result<_>>()?;
    let col = |j: usize| -> Vec<f64> {
        per.iter()
            .map(|t| match j {
                0 => t.0,
                1 => t.1,
                2 => t.2,
                3 => t.3,
                4 => t.4,
                _ => t.5,
            })
            .collect()
    };
    let (mw, mp, m0w, m0p, ms, abs1) = (col(0), col(1), col(2), col(3), col(4), col(5));
    let mq: Vec<f64> = quads.iter().map(|q| mean0(&q.q)).collect();
    let bp_first = exp_backward(&x, &mp);
    let bp_mean = exp_backward(&x, &m0p);
    let bq = exp_backward(&x, &mq);
    let qi = cumulative_q_integral(grid, &quads)?;
    let mut a1_tilde = Vec::with_capacity(nx);
    let mut a1_tilde_s = Vec::with_capacity(nx);
    let mut mean_defect: f64 = 0.0;
    for i in 0..nx {
        // M(I f) = −∫ y f.
        let mi = -(mw[i] + bp_first[i]);
        let c_q = qi.total - qi.cumulative[i];
        a1_tilde.push(mi + bq[i] - c_q);
        a1_tilde_s.push(mi + bq[i] + ms[i]);
        if abs1[i] > 0.0 {
            mean_defect = mean_defect.max((m0w[i] + bp_mean[i]).abs() / abs1[i]);
        }
    }
    let mean = a1_tilde.iter().sum::<f64>() / nx.max(1) as f64;
    let scale = mean.abs();
    let rel = |d: f64| if scale == 0.0 { if d == 0.0 { 0.0 } else { f64::INFINITY } } else { d / scale };
    let var = a1_tilde.iter().map(|a| (a - mean).abs()).fold(0.0, f64::max);
    let cross = a1_tilde.iter().zip(&a1_tilde_s).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(A1Diagnostic {
        x,
        a1_tilde,
        a1_tilde_s,
        mean,
        relative_variation: rel(var),
        cross_form_defect: rel(cross),
        mean_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::profiles::f1;
    use crate::solver::{picard_solve, FlowState};

    fn small() -> Params {
        Params { ny: 128, half_width: 200.0, nx: 40, x_max: 600.0, nt: 1, ..Params::reference() }
    }

    fn odd_vorticity(grid: &Grid, amp: f64, x0: f64, nt: usize) -> Slice {
        let v: Vec<f64> = grid.y().iter().map(|&y| amp * f1(y / x0.sqrt()) / x0).collect();
        let mut s = Slice::zeros(nt, grid.ny());
        s.mode_mut(0).copy_from_slice(&grid.forward_real(&v).unwrap());
        s
    }

    #[test]
    fn zero_state_gives_zero_coefficients() {
        let p = small();
        let g = Grid::new(&p).unwrap();
        let b = BoundaryData::zeros(p.nt, g.ny());
        let s = FlowState::zeros(g.stations().len(), p.nt, g.ny());
        let r = extract_coeffs(&p, &g, &b, &s).unwrap();
        assert_eq!(r.coeffs, AsymptoticCoeffs::zeros(p.nt));
        assert_eq!(r.a4_pieces.sum(), 0.0);
        let d = a1_diagnostic(&p, &g, &s).unwrap();
        assert!(d.a1_tilde.iter().all(|&a| a == 0.0));
    }

    /// Linear regime: Q = 0, a₁ = −M(I P₀w) = ∫ y w, and ã₁(x) = M(I P₀ω(x))
    /// is the conserved first moment, i.e. −a₁ at every station.
    #[test]
    fn linear_regime_a1() {
        let p = Params { nonlinear: false, ny: 512, ..small() };
        let g = Grid::new(&p).unwrap();
        let w = odd_vorticity(&g, 0.05, p.x0, p.nt);
        let b = BoundaryData::new(&g, w.clone(), Slice::zeros(p.nt, g.ny()));
        let s = picard_solve(&p, &g, &b).unwrap();
        let r = extract_coeffs(&p, &g, &b, &s).unwrap();
        // ∫ y f₁(y/√x₀)/x₀ dy = ∫ z f₁(z) dz = 2 ∫ f₀ = 2.
        let want = 0.05 * 2.0;
        assert!((r.coeffs.a1 - want).abs() < 1e-10 * want, "{} {want}", r.coeffs.a1);
        assert_eq!(r.q_integral.total, 0.0);
        let d = a1_diagnostic(&p, &g, &s).unwrap();
        assert!(d.relative_variation < 1e-6, "{}", d.relative_variation);
        assert!((d.sum_with(r.coeffs.a1)).abs() < 1e-6 * want);
    }

    #[test]
    fn symmetric_boundary_has_no_a3() {
        let p = small();
        let g = Grid::new(&p).unwrap();
        let w = odd_vorticity(&g, 0.02, p.x0, p.nt);
        let nu: Vec<f64> = g.y().iter().map(|&y| 0.01 * (-y * y / (4.0 * p.x0)).exp()).collect();
        let mut n = Slice::zeros(p.nt, g.ny());
        n.mode_mut(0).copy_from_slice(&g.forward_real(&nu).unwrap());
        let b = BoundaryData::new(&g, w, n);
        let s = picard_solve(&p, &g, &b).unwrap();
        let r = extract_coeffs(&p, &g, &b, &s).unwrap();
        assert!(r.coeffs.a3.iter().all(|a| a.norm() < 1e-12));
        assert_eq!(r.coeffs.a5, r.coeffs.a1 * r.coeffs.a1);
        assert!(r.force.1.abs() < 1e-12);
    }

    /// The k → 0⁺ limit of the even part of μ̂ is the whole-line mass of
    /// the even part of μ, here a Cauchy profile of mass π.
    #[test]
    fn a3_is_the_mass_of_the_even_part_of_mu() {
        let g = Grid::spatial(4096, 4000.0).unwrap();
        let l = 5.0;
        let mu: Vec<f64> = g.y().iter().map(|&y| l / (l * l + y * y)).collect();
        let c = g.forward_real(&mu).unwrap();
        // whole-line mass π; periodic truncation costs O(ℓ/L).
        let a3 = even_limit(&g, &c);
        assert!((a3.re - std::f64::consts::PI).abs() < 5e-3, "{a3}");
    }

    #[test]
    fn exp_backward_of_constant() {
        // ∫ₓ^∞ e^{−(x̃−x)} dx̃ = 1 when g ≡ 1 continued by a flat tail.
        let x: Vec<f64> = (0..200).map(|i| 10.0 + i as f64 * 0.5).collect();
        let g = vec![1.0; x.len()];
        let b = exp_backward(&x, &g);
        assert!(b.iter().all(|v| (v - 1.0).abs() < 1e-3), "{:?}", &b[..3]);
    }
}

//! Weighted L^p norms and the ten-component composite norm ‖(v, ω)‖_x.

use num_complex::Complex64 as C64;

use crate::error::{Result, WakeError};
use crate::field::Slice;
use crate::grid::Grid;
use crate::ops::derivative;
use crate::params::{bracket, Params};

/// L^p norm of grid samples (rectangle rule on the periodic grid; p = ∞
/// gives the grid maximum).
pub fn lp_norm(vals: &[C64], p: f64, dy: f64) -> f64 {
    if p.is_infinite() {
        vals.iter().map(|c| c.norm()).fold(0.0, f64::max)
    } else if p == 1.0 {
        vals.iter().map(|c| c.norm()).sum::<f64>() * dy
    } else if p == 2.0 {
        (vals.iter().map(|c| c.norm_sqr()).sum::<f64>() * dy).sqrt()
    } else {
        (vals.iter().map(|c| c.norm().powf(p)).sum::<f64>() * dy).powf(1.0 / p)
    }
}

/// ‖|y|^β f‖_p on the grid.
pub fn weighted_lp_norm(grid: &Grid, vals: &[C64], p: f64, beta: f64) -> f64 {
    let w: Vec<C64> = grid.y().iter().zip(vals).map(|(&y, &v)| v * y.abs().powf(beta)).collect();
    lp_norm(&w, p, grid.dy())
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) {
        return Err(WakeError::InvalidParam(format!("integrability index p = {p} < 1")));
    }
    Ok(())
}

/// Σ_n ‖f_n‖_p from precomputed physical modes.
pub fn mode_sum_norm(grid: &Grid, phys: &[Vec<C64>], p: f64, beta: f64) -> f64 {
    phys.iter()
        .map(|m| if beta == 0.0 { lp_norm(m, p, grid.dy()) } else { weighted_lp_norm(grid, m, p, beta) })
        .sum()
}

/// ⟨x⟩^σ Σ_n ‖f_n(x,·)‖_{L^p}.
pub fn weighted_norm(grid: &Grid, f: &Slice, p: f64, sigma: f64, x: f64) -> Result<f64> {
    check_p(p)?;
    let phys = f.to_physical(grid)?;
    Ok(bracket(x).powf(sigma) * mode_sum_norm(grid, &phys, p, 0.0))
}

pub const COMPONENT_NAMES: [&str; 10] = [
    "u_inf", "u_q", "dyu_r", "v_inf", "v_p", "dyv_r", "omega_2", "ybeta_omega_2", "dyomega_inf",
    "dyomega_1",
];

/// The ten weighted components at one station and their sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport {
    pub x: f64,
    pub components: [f64; 10],
}

impl NormReport {
    pub fn total(&self) -> f64 {
        self.components.iter().sum()
    }
}

/// ‖(v, ω)‖_x assembled component by component.
pub fn composite_norm(
    params: &Params,
    grid: &Grid,
    u: &Slice,
    v: &Slice,
    w: &Slice,
    x: f64,
) -> Result<NormReport> {
    check_p(params.p)?;
    check_p(params.q)?;
    check_p(params.r)?;
    let (p, q, r) = (params.p, params.q, params.r);
    let (phi, eta, xi, beta) = (params.phi, params.eta, params.xi, params.beta);
    let bx = bracket(x);
    let uu = u.to_physical(grid)?;
    let vv = v.to_physical(grid)?;
    let ww = w.to_physical(grid)?;
    let du = derivative(grid, u).to_physical(grid)?;
    let dv = derivative(grid, v).to_physical(grid)?;
    let dw = derivative(grid, w).to_physical(grid)?;
    let n = |f: &[Vec<C64>], p: f64, b: f64| mode_sum_norm(grid, f, p, b);
    let inf = f64::INFINITY;
    let components = [
        bx.powf(0.5) * n(&uu, inf, 0.0),
        bx.powf(0.5 - 1.0 / q) * n(&uu, q, 0.0),
        bx.powf(1.0 - 0.5 / r - eta) * n(&du, r, 0.0),
        bx.powf(1.0 - phi) * n(&vv, inf, 0.0),
        bx.powf(1.0 - phi - 1.0 / p) * n(&vv, p, 0.0),
        bx.powf(1.5 - 0.5 / r - xi) * n(&dv, r, 0.0),
        bx.powf(0.75) * n(&ww, 2.0, 0.0),
        bx.powf(0.75 - beta / 2.0) * n(&ww, 2.0, beta),
        bx.powf(1.5) * n(&dw, inf, 0.0),
        bx * n(&dw, 1.0, 0.0),
    ];
    Ok(NormReport { x, components })
}

/// Largest temporal-mode contribution Σ‖c_{±Nt}‖ relative to the total,
/// a diagnostic for the truncation in n.
pub fn temporal_tail(grid: &Grid, f: &Slice) -> Result<f64> {
    let nt = f.nt() as i64;
    if nt == 0 {
        return Ok(0.0);
    }
    let phys = f.to_physical(grid)?;
    let norms: Vec<f64> = phys.iter().map(|m| lp_norm(m, 2.0, grid.dy())).collect();
    let total: f64 = norms.iter().sum();
    if total == 0.0 {
        return Ok(0.0);
    }
    Ok((norms[0] + norms[norms.len() - 1]) / total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::profiles::f0;
    use proptest::prelude::*;

    #[test]
    fn zero_field_zero_components() {
        let p = Params::reference();
        let g = Grid::spatial(64, 10.0).unwrap();
        let z = Slice::zeros(1, 64);
        let r = composite_norm(&p, &g, &z, &z, &z, 30.0).unwrap();
        assert!(r.components.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn gaussian_sup_norm() {
        let g = Grid::spatial(512, 200.0).unwrap();
        let x: f64 = 16.0;
        let v: Vec<f64> = g.y().iter().map(|&y| f0(y / x.sqrt()) / x.sqrt()).collect();
        let s = Slice::from_modes(vec![g.forward_real(&v).unwrap()]).unwrap();
        let got = weighted_norm(&g, &s, f64::INFINITY, 0.5, x).unwrap();
        let want = bracket(x).sqrt() / (4.0 * std::f64::consts::PI).sqrt() / x.sqrt();
        assert!((got - want).abs() < 1e-13);
    }

    #[test]
    fn p_below_one_rejected() {
        let g = Grid::spatial(16, 1.0).unwrap();
        assert!(weighted_norm(&g, &Slice::zeros(0, 16), 0.5, 0.0, 1.0).is_err());
    }

    proptest! {
        // ‖f‖₁ ≤ C_β ‖f‖₂^{1−1/(2β)} ‖|y|^β f‖₂^{1/(2β)}; splitting at the
        // optimal radius gives C₂ ≈ 2.16, so 4 is a safe bound.
        #[test]
        fn l1_interpolation_inequality(a in 0.1f64..3.0, b in -5.0f64..5.0, c in 0.2f64..4.0, d in -2.0f64..2.0) {
            let g = Grid::spatial(1024, 60.0).unwrap();
            let beta = 2.0;
            let v: Vec<C64> = g.y().iter().map(|&y| C64::new(
                a * (-(y - b) * (y - b) / c).exp() + d * (-(y + 1.0) * (y + 1.0)).exp(), 0.0)).collect();
            let l1 = lp_norm(&v, 1.0, g.dy());
            let l2 = lp_norm(&v, 2.0, g.dy());
            let w2 = weighted_lp_norm(&g, &v, 2.0, beta);
            prop_assert!(l1 <= 4.0 * l2.powf(1.0 - 0.5 / beta) * w2.powf(0.5 / beta));
        }
    }
}

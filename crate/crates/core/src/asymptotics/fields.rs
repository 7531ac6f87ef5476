//! The far-field expansion (u_a, v_a, ω_a) for given coefficients, both
//! pointwise on the whole line and periodically on the spectral grid.

use num_complex::Complex64 as C64;

use super::profiles::{f0, f1, g0, g1, h};
use crate::error::{Result, WakeError};
use crate::field::{Slice, ZERO};
use crate::grid::Grid;
use crate::ops::sigma;

/// a = (a₁, a₂(t), a₃(t), a₄, a₅, a₆); a₂ and a₃ are stored per temporal
/// mode n = −Nt..=Nt.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticCoeffs {
    pub a1: f64,
    pub a2: Vec<C64>,
    pub a3: Vec<C64>,
    pub a4: f64,
    pub a5: f64,
    pub a6: f64,
}

impl AsymptoticCoeffs {
    pub fn zeros(nt: usize) -> Self {
        AsymptoticCoeffs { a1: 0.0, a2: vec![ZERO; 2 * nt + 1], a3: vec![ZERO; 2 * nt + 1], a4: 0.0, a5: 0.0, a6: 0.0 }
    }

    /// Coefficients with a₅ = a₁² and a₆ = a₁·P₀a₃.
    pub fn new(a1: f64, a2: Vec<C64>, a3: Vec<C64>, a4: f64) -> Self {
        assert_eq!(a2.len(), a3.len());
        assert!(a2.len() % 2 == 1, "mode vectors must have odd length");
        let nt = a2.len() / 2;
        let a6 = a1 * a3[nt].re;
        AsymptoticCoeffs { a1, a2, a3, a4, a5: a1 * a1, a6 }
    }

    pub fn nt(&self) -> usize {
        self.a2.len() / 2
    }

    /// a₂, a₃ of temporal mode n (zero outside the stored range).
    pub fn a2_mode(&self, n: i64) -> C64 {
        self.mode(&self.a2, n)
    }

    pub fn a3_mode(&self, n: i64) -> C64 {
        self.mode(&self.a3, n)
    }

    fn mode(&self, v: &[C64], n: i64) -> C64 {
        let i = n + self.nt() as i64;
        if i < 0 || i as usize >= v.len() {
            ZERO
        } else {
            v[i as usize]
        }
    }

    /// Only the first-order parabolic part (a₁, 0, 0, 0, 0, 0).
    pub fn first_order(&self) -> Self {
        AsymptoticCoeffs { a1: self.a1, ..AsymptoticCoeffs::zeros(self.nt()) }
    }

    /// Same coefficients with a₄ replaced.
    pub fn with_a4(&self, a4: f64) -> Self {
        AsymptoticCoeffs { a4, ..self.clone() }
    }

    /// Same coefficients with a₄ = a₅ = a₆ = 0 (the parts entering Q_a).
    pub fn leading(&self) -> Self {
        AsymptoticCoeffs { a4: 0.0, a5: 0.0, a6: 0.0, ..self.clone() }
    }
}

/// Which field of the expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    U,
    V,
    Omega,
}

/// Pointwise whole-line value of temporal mode n at (x, y).
pub fn asymptotic_point(c: &AsymptoticCoeffs, comp: Component, n: i64, x: f64, y: f64) -> C64 {
    let sx = x.sqrt();
    let (zp, zl) = (y / sx, y / x);
    let (a2, a3) = (c.a2_mode(n), c.a3_mode(n));
    let steady = if n == 0 { 1.0 } else { 0.0 };
    match comp {
        Comp::U => {
            let heat = c.a1 * f0(zp) / sx - (c.a5 * h(zp) + (c.a6 * x.ln() + c.a4) * f1(zp)) / (2.0 * x);
            steady * heat + (a2 * g0(zl) - a3 * g1(zl)) / x
        }
        Comp::V => steady * c.a1 * f1(zp) / (2.0 * x) + (a2 * g1(zl) + a3 * g0(zl)) / x,
        Comp::Omega => C64::new(steady * c.a1 * f1(zp) / (2.0 * x), 0.0),
    }
}

use Component as Comp;

/// (u_a, v_a, ω_a) at x on the periodic grid.  The profiles f₀(y/√x)/√x,
/// f₁(y/√x)/x, g₀(y/x)/x and g₁(y/x)/x are evaluated through their exact
/// symbols e^{−k²x}, 2ik e^{−k²x}, e^{−|k|x} and iσ(k)e^{−|k|x}, so the
/// result is the periodization of the whole-line expansion; h (Gaussian
/// decay) is sampled directly.
pub fn asymptotic_fields(grid: &Grid, c: &AsymptoticCoeffs, x: f64, nt: usize) -> Result<[Slice; 3]> {
    if !(x > 0.0) {
        return Err(WakeError::InvalidParam(format!("asymptotic fields need x > 0, got {x}")));
    }
    let ny = grid.ny();
    let k = grid.k();
    let nyq = grid.nyquist();
    let sx = x.sqrt();
    let hv: Vec<f64> = grid.y().iter().map(|&y| h(y / sx) / x).collect();
    let h_hat = if c.a5 != 0.0 { grid.forward_real(&hv)? } else { vec![ZERO; ny] };
    let mut u = Slice::zeros(nt, ny);
    let mut v = Slice::zeros(nt, ny);
    let mut w = Slice::zeros(nt, ny);
    let b = c.a6 * x.ln() + c.a4;
    for n in -(nt as i64)..=nt as i64 {
        let (a2, a3) = (c.a2_mode(n), c.a3_mode(n));
        for m in 0..ny {
            if m == nyq {
                continue;
            }
            let km = k[m];
            let heat = (-km * km * x).exp();
            let f1s = C64::new(0.0, 2.0 * km) * heat; // f₁(y/√x)/x
            let pois = (-km.abs() * x).exp();
            let g1s = C64::new(0.0, sigma(km)) * pois; // g₁(y/x)/x
            let (mut uu, mut vv, mut ww) = ((a2 * pois - a3 * g1s), (a2 * g1s + a3 * pois), ZERO);
            if n == 0 {
                uu += c.a1 * heat - 0.5 * (c.a5 * h_hat[m] + b * f1s);
                vv += 0.5 * c.a1 * f1s;
                ww += 0.5 * c.a1 * f1s;
            }
            u.mode_mut(n)[m] = uu;
            v.mode_mut(n)[m] = vv;
            w.mode_mut(n)[m] = ww;
        }
    }
    Ok([u, v, w])
}

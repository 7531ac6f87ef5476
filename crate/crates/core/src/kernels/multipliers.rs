//! x-independent multipliers L₁, L₂, L_u, L_v and their regularized parts.

use num_complex::Complex64 as C64;

use super::dispersion::Dispersion;
use crate::error::Result;
use crate::field::{Slice, ZERO};
use crate::grid::Grid;
use crate::ops::op_i_mode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Multiplier {
    L1,
    L2,
    Lu,
    Lv,
    /// L̃_u = L_u + I P₀ (regular at k = 0).
    LuTilde,
    /// L̃_v = L_v − 1.
    LvTilde,
}

/// Symbol value at (k, nS).  Returns `None` only for L_u at (k, nS) = (0, 0),
/// whose singular part is the operator −I.
pub fn multiplier_symbol(id: Multiplier, k: f64, ns: f64) -> Option<C64> {
    let d = Dispersion::new(k, ns);
    let ins = C64::new(0.0, ns);
    let ik = C64::new(0.0, k);
    let den = k * k + ns * ns;
    Some(match id {
        Multiplier::L1 => C64::new(if den == 0.0 { 1.0 } else { k * k / den }, 0.0),
        Multiplier::L2 => C64::new(if den == 0.0 { 0.0 } else { k * ns / den }, 0.0),
        Multiplier::Lu if ns == 0.0 && k == 0.0 => return None,
        Multiplier::Lu => ik / (d.lambda_minus + ins),
        Multiplier::Lv if ns == 0.0 => C64::new(1.0, 0.0),
        Multiplier::Lv => d.lambda_minus / (d.lambda_minus + ins),
        Multiplier::LuTilde if ns == 0.0 => -ik / d.lambda_plus,
        Multiplier::LuTilde => ik / (d.lambda_minus + ins),
        Multiplier::LvTilde if ns == 0.0 => ZERO,
        Multiplier::LvTilde => -ins / (d.lambda_minus + ins),
    })
}

/// Apply a multiplier to a slice.  L_u at n = 0 is evaluated as
/// −I f + L̃_u f, so the n = 0 mode must have zero mean.
pub fn multiplier_l(grid: &Grid, id: Multiplier, strouhal: f64, mean_tol: f64, f: &Slice) -> Result<Slice> {
    let k = grid.k();
    let nyq = grid.nyquist();
    let mut out = f.map(|n, m, c| {
        if m == nyq {
            return ZERO;
        }
        let ns = n as f64 * strouhal;
        let id = if id == Multiplier::Lu && n == 0 { Multiplier::LuTilde } else { id };
        c * multiplier_symbol(id, k[m], ns).expect("regular symbol")
    });
    if id == Multiplier::Lu {
        let ip = op_i_mode(grid, f.mode(0), mean_tol)?;
        for (o, i) in out.mode_mut(0).iter_mut().zip(ip) {
            *o -= i;
        }
    }
    Ok(out)
}

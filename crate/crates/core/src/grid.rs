//! Uniform periodic y-grid, its wavenumbers, the x-stations, and the
//! discrete Fourier transform in the convention f̂(k) = ∫ e^{iky} f dy.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Result, WakeError};
use crate::params::Params;

/// y-nodes on [−L, L), wavenumbers πm/L in FFT order, and x-stations.
#[derive(Clone)]
pub struct Grid {
    half_width: f64,
    y: Vec<f64>,
    k: Vec<f64>,
    x: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    pad_fwd: Arc<dyn Fft<f64>>,
    pad_inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("ny", &self.ny())
            .field("half_width", &self.half_width)
            .field("stations", &self.x.len())
            .finish()
    }
}

impl Grid {
    pub fn new(params: &Params) -> Result<Self> {
        Self::with_stations(params.ny, params.half_width, params.stations())
    }

    /// A y-grid without x-stations (for single-slice work).
    pub fn spatial(ny: usize, half_width: f64) -> Result<Self> {
        Self::with_stations(ny, half_width, Vec::new())
    }

    pub fn with_stations(ny: usize, half_width: f64, stations: Vec<f64>) -> Result<Self> {
        if ny < 4 || ny % 2 != 0 {
            return Err(WakeError::InvalidParam(format!("ny = {ny} must be even and >= 4")));
        }
        if !(half_width > 0.0) {
            return Err(WakeError::InvalidParam("half_width must be positive".into()));
        }
        if stations.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(WakeError::InvalidParam("stations must be strictly increasing".into()));
        }
        let dy = 2.0 * half_width / ny as f64;
        let y = (0..ny).map(|j| -half_width + j as f64 * dy).collect();
        let k = (0..ny)
            .map(|m| std::f64::consts::PI * signed_index(m, ny) as f64 / half_width)
            .collect();
        let mut planner = FftPlanner::new();
        let npad = 3 * ny / 2;
        Ok(Grid {
            half_width,
            y,
            k,
            x: stations,
            fwd: planner.plan_fft_forward(ny),
            inv: planner.plan_fft_inverse(ny),
            pad_fwd: planner.plan_fft_forward(npad),
            pad_inv: planner.plan_fft_inverse(npad),
        })
    }

    pub fn ny(&self) -> usize {
        self.y.len()
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn dy(&self) -> f64 {
        2.0 * self.half_width / self.ny() as f64
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Signed wavenumbers in FFT order; the Nyquist entry is stored as +πN/(2L).
    pub fn k(&self) -> &[f64] {
        &self.k
    }

    pub fn stations(&self) -> &[f64] {
        &self.x
    }

    pub fn nyquist(&self) -> usize {
        self.ny() / 2
    }

    /// Index of −k_m.
    pub fn neg_index(&self, m: usize) -> usize {
        (self.ny() - m) % self.ny()
    }

    /// Size of the 3/2-padded physical grid used for products.
    pub fn padded_len(&self) -> usize {
        3 * self.ny() / 2
    }

    fn check(&self, n: usize, what: usize) -> Result<()> {
        if n != what {
            return Err(WakeError::SizeMismatch { expected: what, got: n });
        }
        Ok(())
    }

    /// y-values → f̂(k_m) = dy Σ_j e^{i k_m y_j} f_j.
    pub fn forward(&self, values: &[C64]) -> Result<Vec<C64>> {
        let n = self.ny();
        self.check(values.len(), n)?;
        let mut buf = values.to_vec();
        self.inv.process(&mut buf);
        let dy = self.dy();
        for (m, c) in buf.iter_mut().enumerate() {
            *c *= if m % 2 == 0 { dy } else { -dy };
        }
        Ok(buf)
    }

    pub fn forward_real(&self, values: &[f64]) -> Result<Vec<C64>> {
        let v: Vec<C64> = values.iter().map(|&x| C64::new(x, 0.0)).collect();
        self.forward(&v)
    }

    /// f̂(k_m) → f(y_j) = (1/2π) Σ_m Δk e^{−i k_m y_j} f̂_m.
    pub fn inverse(&self, coeffs: &[C64]) -> Result<Vec<C64>> {
        let n = self.ny();
        self.check(coeffs.len(), n)?;
        let mut buf: Vec<C64> = coeffs
            .iter()
            .enumerate()
            .map(|(m, &c)| if m % 2 == 0 { c } else { -c })
            .collect();
        self.fwd.process(&mut buf);
        let s = 1.0 / (2.0 * self.half_width);
        for c in buf.iter_mut() {
            *c *= s;
        }
        Ok(buf)
    }

    /// Evaluate the band-limited interpolant on the 3/2-padded y-grid.
    /// The Nyquist coefficient is dropped.
    pub fn inverse_padded(&self, coeffs: &[C64]) -> Result<Vec<C64>> {
        let n = self.ny();
        self.check(coeffs.len(), n)?;
        let npad = self.padded_len();
        let mut buf = vec![C64::new(0.0, 0.0); npad];
        for (m, &c) in coeffs.iter().enumerate() {
            if m == n / 2 {
                continue;
            }
            let s = signed_index(m, n);
            let idx = s.rem_euclid(npad as i64) as usize;
            buf[idx] = if s % 2 == 0 { c } else { -c };
        }
        self.pad_fwd.process(&mut buf);
        let sc = 1.0 / (2.0 * self.half_width);
        for c in buf.iter_mut() {
            *c *= sc;
        }
        Ok(buf)
    }

    /// Transform values on the padded grid back to the N retained
    /// coefficients (Nyquist set to zero).
    pub fn forward_padded(&self, values: &[C64]) -> Result<Vec<C64>> {
        let n = self.ny();
        let npad = self.padded_len();
        self.check(values.len(), npad)?;
        let mut buf = values.to_vec();
        self.pad_inv.process(&mut buf);
        let dyp = 2.0 * self.half_width / npad as f64;
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (m, o) in out.iter_mut().enumerate() {
            if m == n / 2 {
                continue;
            }
            let s = signed_index(m, n);
            let c = buf[s.rem_euclid(npad as i64) as usize] * dyp;
            *o = if s % 2 == 0 { c } else { -c };
        }
        Ok(out)
    }
}

/// FFT-order index m ↦ signed index in [−N/2, N/2).  The Nyquist index N/2
/// maps to +N/2.
pub fn signed_index(m: usize, n: usize) -> i64 {
    if m <= n / 2 {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(y: f64) -> f64 {
        (-y * y / 4.0).exp() / (4.0 * std::f64::consts::PI).sqrt()
    }

    #[test]
    fn gaussian_transform_is_spectrally_accurate() {
        let g = Grid::spatial(256, 20.0).unwrap();
        let v: Vec<f64> = g.y().iter().map(|&y| gauss(y)).collect();
        let c = g.forward_real(&v).unwrap();
        for (m, &k) in g.k().iter().enumerate() {
            assert!((c[m] - C64::new((-k * k).exp(), 0.0)).norm() < 1e-13, "m={m}");
        }
    }

    #[test]
    fn round_trip() {
        let g = Grid::spatial(128, 10.0).unwrap();
        let v: Vec<C64> = g
            .y()
            .iter()
            .map(|&y| C64::new(gauss(y) * (1.0 + y.sin()), (0.3 * y).cos() * gauss(y - 1.0)))
            .collect();
        let back = g.inverse(&g.forward(&v).unwrap()).unwrap();
        let err = v.iter().zip(&back).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-14);
    }

    #[test]
    fn derivative_by_symbol_matches_finite_difference() {
        let g = Grid::spatial(128, 20.0).unwrap();
        let f = |y: f64| (0.5 * y).sin() * gauss(y);
        let v: Vec<f64> = g.y().iter().map(|&y| f(y)).collect();
        let mut c = g.forward_real(&v).unwrap();
        let nyq = g.nyquist();
        for (m, cm) in c.iter_mut().enumerate() {
            *cm *= if m == nyq { C64::new(0.0, 0.0) } else { C64::new(0.0, -g.k()[m]) };
        }
        let d = g.inverse(&c).unwrap();
        let h = 1e-4;
        for (j, &y) in g.y().iter().enumerate() {
            let fd = (-f(y + 2.0 * h) + 8.0 * f(y + h) - 8.0 * f(y - h) + f(y - 2.0 * h)) / (12.0 * h);
            assert!((d[j].re - fd).abs() < 1e-9 && d[j].im.abs() < 1e-14);
        }
    }

    #[test]
    fn padded_round_trip_is_identity() {
        let g = Grid::spatial(64, 12.0).unwrap();
        let v: Vec<f64> = g.y().iter().map(|&y| gauss(y)).collect();
        let mut c = g.forward_real(&v).unwrap();
        c[g.nyquist()] = C64::new(0.0, 0.0);
        let back = g.forward_padded(&g.inverse_padded(&c).unwrap()).unwrap();
        for (a, b) in c.iter().zip(&back) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn size_mismatch() {
        let g = Grid::spatial(16, 1.0).unwrap();
        assert!(matches!(g.forward(&[C64::new(0.0, 0.0); 3]), Err(WakeError::SizeMismatch { .. })));
    }
}

//! Physical-space kernels from their Fourier symbols.
//!
//! K(y) = (1/2π)∫ e^{−iky} K̂(k) dk is sampled on a uniform y-grid by one
//! FFT of the symbol.  The grid is sized per x so that the symbol is
//! negligible beyond k_max and the kernel negligible beyond ±Y.
//!
//! Poisson-rate kernels (symbols e^{−|k|x}·r(k, σ)) have a jump or a kink
//! at k = 0, hence algebraic tails 1/|y| or 1/y² that no finite periodic
//! box captures.  For those, the k → 0± behaviour of the symbol is matched
//! by an analytic model (a + jσ(k) + γ|k|)·e^{−|k|x}, whose physical form
//! is a combination of Cauchy-type functions; only the C¹ remainder goes
//! through the FFT, and the model's tail beyond ±Y is integrated exactly
//! by quadrature.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use super::quad::integrate;
use crate::ops::sigma;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Analytic symbols (Oseen, heat): exponentially decaying kernels.
    Smooth,
    /// Symbols carrying e^{−|k|x} with a non-smooth k = 0 behaviour.
    Poisson,
}

#[derive(Debug, Clone, Copy)]
pub struct Layout {
    pub half_width: f64,
    pub n: usize,
}

impl Layout {
    pub fn for_x(family: Family, x: f64) -> Self {
        let kmax = 45.0 / x + 10.0;
        let half_width = match family {
            Family::Smooth => 60.0 + 30.0 * x.sqrt(),
            Family::Poisson => 50.0 + 100.0 * x,
        };
        let n = ((2.0 * half_width * kmax / PI).ceil() as usize).next_power_of_two().max(1024);
        Layout { half_width, n }
    }

    pub fn dy(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.dy()
    }

    pub fn dk(&self) -> f64 {
        PI / self.half_width
    }

    /// Signed wavenumber of FFT bin m.
    pub fn k(&self, m: usize) -> f64 {
        let mm = if m < self.n / 2 { m as f64 } else { m as f64 - self.n as f64 };
        mm * self.dk()
    }
}

/// (a + jσ(k) + γ|k|)·e^{−|k|x}.
#[derive(Debug, Clone, Copy)]
pub struct PoissonModel {
    pub x: f64,
    pub a: C64,
    pub j: C64,
    pub gamma: C64,
}

impl PoissonModel {
    /// Match the one-sided limits and slopes of `s` at k = 0 by quadratic
    /// extrapolation from ±ε, ±2ε, ±3ε.
    pub fn fit(s: &dyn Fn(f64) -> C64, x: f64, eps: f64) -> Self {
        let side = |sgn: f64| {
            let h = sgn * eps;
            let (s1, s2, s3) = (s(h), s(2.0 * h), s(3.0 * h));
            let size = s1.norm().max(s2.norm()).max(s3.norm());
            (3.0 * s1 - 3.0 * s2 + s3, (-2.5 * s1 + 4.0 * s2 - 1.5 * s3) / h, size)
        };
        let (p0, p1, ps) = side(1.0);
        let (m0, m1, ms) = side(-1.0);
        let a = 0.5 * (p0 + m0);
        let mut j = 0.5 * (p0 - m0);
        // A genuine jump is as large as the nearby symbol values; one at the
        // extrapolation-error level would add a spurious, non-integrable
        // 1/y tail.
        if j.norm() <= 1e-6 * ps.max(ms) {
            j = C64::new(0.0, 0.0);
        }
        // |k|-coefficient of s, minus the one a·e^{−|k|x} already carries.
        let gamma = 0.5 * (p1 - m1) + a * x;
        PoissonModel { x, a, j, gamma }
    }

    pub fn symbol(&self, k: f64) -> C64 {
        (self.a + self.j * sigma(k) + self.gamma * k.abs()) * (-k.abs() * self.x).exp()
    }

    /// Inverse transform: e^{−|k|x} ↦ x/(π(x²+y²)), σe^{−|k|x} ↦ −(i/π)·y/(x²+y²),
    /// |k|e^{−|k|x} ↦ (x²−y²)/(π(x²+y²)²).
    pub fn value(&self, y: f64) -> C64 {
        let x = self.x;
        let r2 = x * x + y * y;
        let p = x / (PI * r2);
        let q = C64::new(0.0, -y / (PI * r2));
        let r = (x * x - y * y) / (PI * r2 * r2);
        self.a * p + self.j * q + self.gamma * r
    }
}

/// A kernel sampled on a layout (values include the model part, if any).
pub struct Sampled {
    pub layout: Layout,
    pub values: Vec<C64>,
    pub model: Option<PoissonModel>,
}

impl Sampled {
    /// (∫ |y|^{βp} |K|^p dy)^{1/p}; p = ∞ gives sup |y|^β |K|.
    pub fn lp(&self, p: f64, beta: f64) -> f64 {
        let dy = self.layout.dy();
        let w = |j: usize, v: C64| {
            let y = self.layout.y(j).abs();
            if beta == 0.0 {
                v.norm()
            } else {
                y.powf(beta) * v.norm()
            }
        };
        if p.is_infinite() {
            return self.values.iter().enumerate().map(|(j, &v)| w(j, v)).fold(0.0, f64::max);
        }
        let mut acc: f64 = self.values.iter().enumerate().map(|(j, &v)| w(j, v).powf(p)).sum::<f64>() * dy;
        if let Some(m) = self.model {
            acc += model_tail(&m, self.layout.half_width, p, beta, 1e-12 * acc);
        }
        acc.powf(1.0 / p)
    }
}

/// ∫_{|y|>Y} |y|^{βp} |M(y)|^p dy through y = Y/t, to relative accuracy
/// 1e-10 or absolute accuracy `abs_tol` (a model that is zero up to
/// rounding has no tail worth resolving).
fn model_tail(m: &PoissonModel, y0: f64, p: f64, beta: f64, abs_tol: f64) -> f64 {
    let f = |t: f64| {
        let y = y0 / t;
        let v = (m.value(y).norm().powf(p) + m.value(-y).norm().powf(p)) * y.powf(beta * p);
        v * y0 / (t * t)
    };
    integrate(&f, 0.0, 1.0, 1e-10, abs_tol.max(1e-300)).unwrap_or(f64::INFINITY)
}

/// Sample the kernel with symbol `s` (a function of k at fixed x, nS).
/// `scale` is the smallest k-scale of the symbol near k = 0, used to pick
/// the extrapolation step of the Poisson model.
pub fn sample(s: &dyn Fn(f64) -> C64, family: Family, x: f64, scale: f64) -> Sampled {
    let layout = Layout::for_x(family, x);
    let model = match family {
        Family::Smooth => None,
        Family::Poisson => Some(PoissonModel::fit(s, x, 1e-4 * scale.min(1.0).min(1.0 / x))),
    };
    let n = layout.n;
    let norm = layout.dk() / (2.0 * PI);
    let mut buf: Vec<C64> = (0..n)
        .map(|m| {
            if m == n / 2 {
                return C64::new(0.0, 0.0);
            }
            let k = layout.k(m);
            let v = match &model {
                None => s(k),
                Some(_) if k == 0.0 => C64::new(0.0, 0.0),
                Some(md) => s(k) - md.symbol(k),
            };
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            v * (sign * norm)
        })
        .collect();
    let fft = FftPlanner::new().plan_fft_forward(n);
    fft.process(&mut buf);
    if let Some(md) = &model {
        for (j, v) in buf.iter_mut().enumerate() {
            *v += md.value(layout.y(j));
        }
    }
    Sampled { layout, values: buf, model }
}

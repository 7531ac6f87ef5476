//! Band-limited resampling of externally supplied cross-sections onto the
//! solver's y-grid.
//!
//! A trace file lists, per temporal mode, uniformly spaced samples
//!
//! ```text
//! n,y,u_re,u_im,v_re,v_im,omega_re,omega_im
//! ```
//!
//! (lines starting with `#` are comments).  Each column is tapered to zero
//! over the outer [`TAPER_FRACTION`] of its span, zero-extended to a
//! periodic record of twice its length, and the trigonometric interpolant
//! of that record is evaluated on the grid nodes.  Grid nodes outside the
//! sampled span receive zero, so the span must cover the decaying support
//! of the data.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;
use wake_core::{Grid, Slice};

use crate::error::{CliError, Result};

/// Fraction of the sampled span, at each end, over which the data are
/// tapered to zero.
pub const TAPER_FRACTION: f64 = 0.05;
/// Relative tolerance on the uniform spacing of the samples.
const SPACING_TOL: f64 = 1e-9;

/// One column resampled onto the grid.
#[derive(Debug, Clone)]
pub struct Resampled {
    pub values: Vec<C64>,
    /// Largest spectral coefficient beyond what the grid resolves, or in the
    /// top quarter of the sampled band, relative to the largest coefficient.
    pub residual: f64,
}

fn precondition(msg: String) -> CliError {
    CliError::Precondition(msg)
}

/// Interpolate samples `values` at uniformly spaced, increasing `ys` onto
/// the grid nodes.
pub fn resample(grid: &Grid, ys: &[f64], values: &[C64]) -> Result<Resampled> {
    let n = ys.len();
    if n != values.len() {
        return Err(precondition(format!("{} abscissae but {} values", n, values.len())));
    }
    if n < 4 {
        return Err(precondition(format!("need at least 4 samples, got {n}")));
    }
    if let Some(i) = (1..n).find(|&i| !(ys[i] > ys[i - 1])) {
        return Err(precondition(format!("y samples are not increasing at index {i} ({} after {})", ys[i], ys[i - 1])));
    }
    let span = ys[n - 1] - ys[0];
    let half = grid.half_width();
    if span < 0.5 * half {
        return Err(precondition(format!("sampled span {span} is shorter than half the domain half-width ({})", 0.5 * half)));
    }
    let h = span / (n - 1) as f64;
    if let Some(i) = (0..n).find(|&i| (ys[i] - (ys[0] + i as f64 * h)).abs() > SPACING_TOL * h) {
        return Err(precondition(format!("y samples are not uniformly spaced (index {i})")));
    }
    let y = grid.y();
    let dy = grid.dy();

    // Samples exactly on the grid: nothing to interpolate.
    if n == y.len() && (h - dy).abs() <= SPACING_TOL * dy && (ys[0] - y[0]).abs() <= SPACING_TOL * dy {
        return Ok(Resampled { values: values.to_vec(), residual: 0.0 });
    }

    let ramp = TAPER_FRACTION * span;
    let taper = |t: f64| if t >= ramp { 1.0 } else { (0.5 * PI * t / ramp).sin().powi(2) };
    let len = (2 * n).next_power_of_two();
    let mut c: Vec<C64> = (0..len)
        .map(|i| if i < n { values[i] * taper((ys[i] - ys[0]).min(ys[n - 1] - ys[i])) } else { C64::new(0.0, 0.0) })
        .collect();
    FftPlanner::new().plan_fft_forward(len).process(&mut c);

    // Interpolation residual from the sampled spectrum.
    let peak = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let grid_nyquist = PI / dy;
    let mut tail: f64 = 0.0;
    for (m, z) in c.iter().enumerate() {
        let ms = if m <= len / 2 { m as f64 } else { m as f64 - len as f64 };
        let k = 2.0 * PI * ms / (len as f64 * h);
        if ms.abs() > 0.375 * len as f64 || k.abs() >= grid_nyquist {
            tail = tail.max(z.norm());
        }
    }
    let residual = if peak == 0.0 { 0.0 } else { tail / peak };

    let scale = 1.0 / len as f64;
    let out = y
        .iter()
        .map(|&yj| {
            if yj < ys[0] || yj > ys[n - 1] {
                return C64::new(0.0, 0.0);
            }
            let t = (yj - ys[0]) / h;
            let step = C64::from_polar(1.0, 2.0 * PI * t / len as f64);
            let mut z = C64::new(1.0, 0.0);
            let mut acc = c[0];
            for m in 1..len / 2 {
                z *= step;
                acc += c[m] * z + c[len - m] * z.conj();
            }
            acc += c[len / 2] * (PI * t).cos();
            acc * scale
        })
        .collect();
    Ok(Resampled { values: out, residual })
}

/// u, v, ω traces of every retained mode on the grid.
#[derive(Debug, Clone)]
pub struct Traces {
    pub u: Slice,
    pub v: Slice,
    pub w: Slice,
    /// Largest [`Resampled::residual`] over all columns.
    pub residual: f64,
}

/// Samples of one temporal mode.
#[derive(Debug, Clone, Default)]
struct ModeSamples {
    y: Vec<f64>,
    cols: [Vec<C64>; 3],
}

/// Read a trace file and resample every column onto the grid.  Modes that
/// do not appear in the file are zero.
pub fn resample_trace(grid: &Grid, nt: usize, path: &Path) -> Result<Traces> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let bad = |line: usize, msg: String| CliError::format(path, line, msg);
    let mut modes: Vec<ModeSamples> = vec![ModeSamples::default(); 2 * nt + 1];
    let mut header_seen = false;
    for (i, l) in text.lines().enumerate() {
        let ln = i + 1;
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        if !header_seen {
            if l.replace(' ', "") != "n,y,u_re,u_im,v_re,v_im,omega_re,omega_im" {
                return Err(bad(ln, format!("unexpected column header '{l}'")));
            }
            header_seen = true;
            continue;
        }
        let f: Vec<&str> = l.split(',').map(str::trim).collect();
        if f.len() != 8 {
            return Err(bad(ln, format!("expected 8 columns, found {}", f.len())));
        }
        let n: i64 = f[0].parse().map_err(|_| bad(ln, format!("bad mode '{}'", f[0])))?;
        if n.unsigned_abs() as usize > nt {
            return Err(precondition(format!("{}:{ln}: mode {n} exceeds nt = {nt}", path.display())));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(ln, format!("bad number '{s}'")));
        let ms = &mut modes[(n + nt as i64) as usize];
        ms.y.push(num(f[1])?);
        for (j, col) in ms.cols.iter_mut().enumerate() {
            col.push(C64::new(num(f[2 + 2 * j])?, num(f[3 + 2 * j])?));
        }
    }
    if !header_seen {
        return Err(bad(1, "no column header".into()));
    }
    let ny = grid.ny();
    let mut out = [Slice::zeros(nt, ny), Slice::zeros(nt, ny), Slice::zeros(nt, ny)];
    let mut residual: f64 = 0.0;
    for (r, ms) in modes.iter().enumerate() {
        if ms.y.is_empty() {
            continue;
        }
        let n = r as i64 - nt as i64;
        for (j, col) in ms.cols.iter().enumerate() {
            let rs = resample(grid, &ms.y, col)?;
            residual = residual.max(rs.residual);
            out[j].mode_mut(n).copy_from_slice(&grid.forward(&rs.values)?);
        }
    }
    let [u, v, w] = out;
    Ok(Traces { u, v, w, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::spatial(512, 400.0).unwrap()
    }

    fn gauss(y: f64) -> f64 {
        (-y * y / 40.0).exp()
    }

    #[test]
    fn gaussian_at_triple_density_interpolates_to_round_off() {
        let g = grid();
        let h = g.dy() / 3.0;
        let ys: Vec<f64> = (0..=1800).map(|i| -140.6 + i as f64 * h).collect();
        let vals: Vec<C64> = ys.iter().map(|&y| C64::new(gauss(y), -0.5 * gauss(y - 3.0))).collect();
        let r = resample(&g, &ys, &vals).unwrap();
        let err = g
            .y()
            .iter()
            .zip(&r.values)
            .map(|(&y, v)| (v - C64::new(gauss(y), -0.5 * gauss(y - 3.0))).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
        assert!(r.residual < 1e-12, "{}", r.residual);
    }

    #[test]
    fn on_grid_input_is_returned_unchanged() {
        let g = grid();
        let vals: Vec<C64> = g.y().iter().map(|&y| C64::new(gauss(y), y.sin())).collect();
        let r = resample(&g, g.y(), &vals).unwrap();
        assert_eq!(r.values, vals);
    }

    #[test]
    fn short_span_is_rejected() {
        let g = grid();
        let ys: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let vals = vec![C64::new(0.0, 0.0); 100];
        let e = resample(&g, &ys, &vals).unwrap_err();
        assert!(e.to_string().contains("span"), "{e}");
        assert_eq!(e.class(), "precondition");
    }

    #[test]
    fn non_monotone_input_is_rejected() {
        let g = grid();
        let mut ys: Vec<f64> = (0..400).map(|i| i as f64 - 200.0).collect();
        ys.swap(10, 11);
        let vals = vec![C64::new(0.0, 0.0); 400];
        let e = resample(&g, &ys, &vals).unwrap_err();
        assert!(e.to_string().contains("not increasing"), "{e}");
    }

    #[test]
    fn trace_file_fills_the_listed_modes() {
        let g = grid();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trace.csv");
        let mut s = String::from("# cross-section\nn,y,u_re,u_im,v_re,v_im,omega_re,omega_im\n");
        let h = g.dy() / 2.0;
        for i in 0..=600 {
            let y = -150.0 + i as f64 * h;
            s.push_str(&format!("0,{y},{},0,0,0,{},0\n", gauss(y), -y * gauss(y)));
        }
        fs::write(&path, s).unwrap();
        let t = resample_trace(&g, 1, &path).unwrap();
        assert_eq!(t.v.max_abs(), 0.0);
        assert_eq!(t.u.mode(1).iter().map(|c| c.norm()).fold(0.0, f64::max), 0.0);
        let u = g.inverse(t.u.mode(0)).unwrap();
        let err = g.y().iter().zip(&u).map(|(&y, v)| (v.re - gauss(y)).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
    }
}

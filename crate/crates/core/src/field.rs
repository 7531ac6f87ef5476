//! Spectral coefficient containers: one [`Slice`] holds all temporal modes
//! of a field at one x-station; a [`SpectralField`] holds a slice per station.

use std::ops::{Add, AddAssign, Mul, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Result, WakeError};
use crate::grid::Grid;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Coefficients c[n][m] for temporal modes n ∈ [−Nt, Nt] and wavenumber
/// index m (FFT order).
#[derive(Debug, Clone, PartialEq)]
pub struct Slice {
    nt: usize,
    ny: usize,
    data: Vec<C64>,
}

impl Slice {
    pub fn zeros(nt: usize, ny: usize) -> Self {
        Slice { nt, ny, data: vec![ZERO; (2 * nt + 1) * ny] }
    }

    /// Build from per-mode coefficient vectors ordered n = −Nt..=Nt.
    pub fn from_modes(modes: Vec<Vec<C64>>) -> Result<Self> {
        if modes.is_empty() || modes.len() % 2 == 0 {
            return Err(WakeError::InvalidParam("mode count must be odd".into()));
        }
        let ny = modes[0].len();
        if let Some(bad) = modes.iter().find(|m| m.len() != ny) {
            return Err(WakeError::SizeMismatch { expected: ny, got: bad.len() });
        }
        let nt = modes.len() / 2;
        Ok(Slice { nt, ny, data: modes.concat() })
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn n_modes(&self) -> usize {
        2 * self.nt + 1
    }

    /// Temporal mode numbers −Nt..=Nt.
    pub fn mode_numbers(&self) -> impl Iterator<Item = i64> {
        let nt = self.nt as i64;
        -nt..=nt
    }

    fn row(&self, n: i64) -> usize {
        assert!(n.unsigned_abs() as usize <= self.nt, "mode {n} outside ±{}", self.nt);
        (n + self.nt as i64) as usize
    }

    pub fn mode(&self, n: i64) -> &[C64] {
        let r = self.row(n);
        &self.data[r * self.ny..(r + 1) * self.ny]
    }

    pub fn mode_mut(&mut self, n: i64) -> &mut [C64] {
        let r = self.row(n);
        &mut self.data[r * self.ny..(r + 1) * self.ny]
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    /// Apply `f(n, m, c)` to every coefficient.
    pub fn map(&self, mut f: impl FnMut(i64, usize, C64) -> C64) -> Slice {
        let mut out = self.clone();
        for n in self.mode_numbers() {
            for (m, c) in out.mode_mut(n).iter_mut().enumerate() {
                *c = f(n, m, *c);
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Slice {
        Slice { nt: self.nt, ny: self.ny, data: self.data.iter().map(|c| c * s).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// max |c[−n](k) − conj(c[n](−k))|: zero for a real space-time field.
    pub fn reality_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for n in self.mode_numbers() {
            let a = self.mode(n);
            let b = self.mode(-n);
            for m in 0..self.ny {
                let mneg = (self.ny - m) % self.ny;
                d = d.max((b[m] - a[mneg].conj()).norm());
            }
        }
        d
    }

    /// Project onto real space-time fields: c ← (c + conj(c̄))/2.
    pub fn symmetrize_reality(&self) -> Slice {
        let mut out = self.clone();
        for n in self.mode_numbers() {
            for m in 0..self.ny {
                let mneg = (self.ny - m) % self.ny;
                out.mode_mut(n)[m] = 0.5 * (self.mode(n)[m] + self.mode(-n)[mneg].conj());
            }
        }
        out
    }

    /// Keep only modes |n| ≤ nt_new (or zero-extend).
    pub fn with_nt(&self, nt_new: usize) -> Slice {
        let mut out = Slice::zeros(nt_new, self.ny);
        let common = nt_new.min(self.nt) as i64;
        for n in -common..=common {
            out.mode_mut(n).copy_from_slice(self.mode(n));
        }
        out
    }

    /// Physical mode functions f_n(y_j).
    pub fn to_physical(&self, grid: &Grid) -> Result<Vec<Vec<C64>>> {
        self.mode_numbers().map(|n| grid.inverse(self.mode(n))).collect()
    }

    pub fn from_physical(grid: &Grid, modes: &[Vec<C64>]) -> Result<Slice> {
        let coeffs = modes.iter().map(|m| grid.forward(m)).collect::<Result<Vec<_>>>()?;
        Slice::from_modes(coeffs)
    }

    fn zip(&self, other: &Slice, f: impl Fn(C64, C64) -> C64) -> Slice {
        assert_eq!((self.nt, self.ny), (other.nt, other.ny), "slice shape mismatch");
        Slice {
            nt: self.nt,
            ny: self.ny,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect(),
        }
    }
}

impl Add for &Slice {
    type Output = Slice;
    fn add(self, o: &Slice) -> Slice {
        self.zip(o, |a, b| a + b)
    }
}

impl Sub for &Slice {
    type Output = Slice;
    fn sub(self, o: &Slice) -> Slice {
        self.zip(o, |a, b| a - b)
    }
}

impl AddAssign<&Slice> for Slice {
    fn add_assign(&mut self, o: &Slice) {
        assert_eq!((self.nt, self.ny), (o.nt, o.ny), "slice shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            *a += b;
        }
    }
}

impl Mul<f64> for &Slice {
    type Output = Slice;
    fn mul(self, s: f64) -> Slice {
        self.scale(s)
    }
}

/// Which physical quantity a field represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldLabel {
    U,
    V,
    Omega,
    R,
    S,
    P,
    Q,
}

impl FieldLabel {
    pub fn name(self) -> &'static str {
        match self {
            FieldLabel::U => "u",
            FieldLabel::V => "v",
            FieldLabel::Omega => "omega",
            FieldLabel::R => "R",
            FieldLabel::S => "S",
            FieldLabel::P => "P",
            FieldLabel::Q => "Q",
        }
    }
}

/// One field at every x-station.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub label: FieldLabel,
    pub slices: Vec<Slice>,
}

impl SpectralField {
    pub fn zeros(label: FieldLabel, nx: usize, nt: usize, ny: usize) -> Self {
        SpectralField { label, slices: vec![Slice::zeros(nt, ny); nx] }
    }

    pub fn is_finite(&self) -> bool {
        self.slices.iter().all(Slice::is_finite)
    }

    pub fn reality_defect(&self) -> f64 {
        self.slices.iter().map(Slice::reality_defect).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reality_of_real_field() {
        let g = Grid::spatial(32, 5.0).unwrap();
        let f: Vec<f64> = g.y().iter().map(|&y| (-(y - 0.3) * (y - 0.3)).exp()).collect();
        let c = g.forward_real(&f).unwrap();
        let s = Slice::from_modes(vec![c]).unwrap();
        assert!(s.reality_defect() < 1e-15);
    }

    #[test]
    fn symmetrize_is_idempotent() {
        let mut s = Slice::zeros(1, 8);
        s.mode_mut(1)[2] = C64::new(1.0, 2.0);
        s.mode_mut(0)[3] = C64::new(0.5, -1.0);
        let a = s.symmetrize_reality();
        assert!(a.reality_defect() < 1e-16);
        assert_eq!(a, a.symmetrize_reality());
    }

    #[test]
    fn with_nt_truncates_and_extends() {
        let mut s = Slice::zeros(2, 4);
        s.mode_mut(2)[0] = C64::new(1.0, 0.0);
        s.mode_mut(0)[1] = C64::new(2.0, 0.0);
        let t = s.with_nt(0);
        assert_eq!(t.mode(0)[1], C64::new(2.0, 0.0));
        let e = t.with_nt(1);
        assert_eq!(e.mode(1), &[ZERO; 4]);
    }
}

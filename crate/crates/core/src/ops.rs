//! Elementary operators on spectral slices: ∂_y, the antisymmetric
//! primitive I, symmetrization S, the mean M, the temporal projections
//! P and P₀, and the Hilbert transform H.

use num_complex::Complex64 as C64;

use crate::error::{Result, WakeError};
use crate::field::{Slice, ZERO};
use crate::grid::Grid;
use crate::norms::lp_norm;

/// σ(k) = sign(k) with σ(0) = 0.
pub fn sigma(k: f64) -> f64 {
    if k > 0.0 {
        1.0
    } else if k < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// ∂_y, i.e. multiplication by −ik (Nyquist coefficient dropped).
pub fn derivative(grid: &Grid, f: &Slice) -> Slice {
    let k = grid.k();
    let nyq = grid.nyquist();
    f.map(|_, m, c| if m == nyq { ZERO } else { c * C64::new(0.0, -k[m]) })
}

/// f(y) ↦ f(−y).
pub fn reflect(grid: &Grid, f: &Slice) -> Slice {
    let mut out = f.clone();
    for n in f.mode_numbers() {
        let src = f.mode(n);
        for (m, c) in out.mode_mut(n).iter_mut().enumerate() {
            *c = src[grid.neg_index(m)];
        }
    }
    out
}

/// S f(y) = f(y) + f(−y).
pub fn op_s(grid: &Grid, f: &Slice) -> Slice {
    f + &reflect(grid, f)
}

/// M f = f̂(k = 0) for every temporal mode, ordered n = −Nt..=Nt.
pub fn op_m(f: &Slice) -> Vec<C64> {
    f.mode_numbers().map(|n| f.mode(n)[0]).collect()
}

/// P: remove the n = 0 mode.
pub fn op_p(f: &Slice) -> Slice {
    let mut out = f.clone();
    out.mode_mut(0).fill(ZERO);
    out
}

/// P₀: keep only the n = 0 mode.
pub fn op_p0(f: &Slice) -> Slice {
    f.map(|n, _, c| if n == 0 { c } else { ZERO })
}

/// Multiplication by iσ(k) (Nyquist dropped).
pub fn hilbert(grid: &Grid, f: &Slice) -> Slice {
    let k = grid.k();
    let nyq = grid.nyquist();
    f.map(|_, m, c| if m == nyq { ZERO } else { c * C64::new(0.0, sigma(k[m])) })
}

/// First moment ∫ y f dy of one mode by direct quadrature on the grid.
pub fn first_moment_quadrature(grid: &Grid, coeffs: &[C64]) -> Result<C64> {
    let vals = grid.inverse(coeffs)?;
    let dy = grid.dy();
    Ok(grid.y().iter().zip(&vals).map(|(&y, &v)| v * y).sum::<C64>() * dy)
}

/// I applied to one temporal mode: symbol 1/(−ik) for k ≠ 0; the k = 0
/// coefficient is ∫ I f dy = −∫ y f dy (antisymmetric normalization).
pub fn op_i_mode(grid: &Grid, coeffs: &[C64], mean_tol: f64) -> Result<Vec<C64>> {
    let vals = grid.inverse(coeffs)?;
    let l1 = lp_norm(&vals, 1.0, grid.dy());
    let mean = coeffs[0].norm();
    if mean > mean_tol * l1 {
        return Err(WakeError::NonZeroMean { mean, tol: mean_tol * l1 });
    }
    let k = grid.k();
    let nyq = grid.nyquist();
    let dy = grid.dy();
    let mut out: Vec<C64> = coeffs
        .iter()
        .enumerate()
        .map(|(m, &c)| if m == 0 || m == nyq { ZERO } else { c / C64::new(0.0, -k[m]) })
        .collect();
    out[0] = -grid.y().iter().zip(&vals).map(|(&y, &v)| v * y).sum::<C64>() * dy;
    Ok(out)
}

/// I applied mode by mode; every mode must have (relative) zero mean.
pub fn op_i(grid: &Grid, f: &Slice, mean_tol: f64) -> Result<Slice> {
    let modes = f
        .mode_numbers()
        .map(|n| op_i_mode(grid, f.mode(n), mean_tol))
        .collect::<Result<Vec<_>>>()?;
    Slice::from_modes(modes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::profiles::{f0, f1};
    use proptest::prelude::*;

    fn grid() -> Grid {
        Grid::spatial(256, 30.0).unwrap()
    }

    fn slice_of(g: &Grid, f: impl Fn(f64) -> f64) -> Slice {
        let v: Vec<f64> = g.y().iter().map(|&y| f(y)).collect();
        Slice::from_modes(vec![g.forward_real(&v).unwrap()]).unwrap()
    }

    #[test]
    fn i_of_f1_is_minus_two_f0() {
        let g = grid();
        let r = op_i(&g, &slice_of(&g, f1), 1e-10).unwrap();
        let want = slice_of(&g, |y| -2.0 * f0(y));
        assert!((&r - &want).max_abs() < 1e-12);
    }

    #[test]
    fn nonzero_mean_rejected() {
        let g = grid();
        assert!(matches!(op_i(&g, &slice_of(&g, f0), 1e-10), Err(WakeError::NonZeroMean { .. })));
    }

    #[test]
    fn odd_field_symmetrizes_to_zero() {
        let g = grid();
        assert!(op_s(&g, &slice_of(&g, f1)).max_abs() < 1e-15);
    }

    #[test]
    fn mean_of_f0_is_one() {
        let g = grid();
        assert!((op_m(&slice_of(&g, f0))[0] - C64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn projections_partition_identity() {
        let mut s = Slice::zeros(1, 8);
        s.mode_mut(-1)[1] = C64::new(1.0, 1.0);
        s.mode_mut(0)[2] = C64::new(2.0, 0.0);
        assert_eq!(&op_p(&s) + &op_p0(&s), s);
        let stationary = Slice::zeros(0, 8);
        assert_eq!(op_p(&stationary).max_abs(), 0.0);
    }

    #[test]
    fn hilbert_of_poisson_kernel_is_conjugate_kernel() {
        let g = Grid::spatial(4096, 400.0).unwrap();
        let x = 2.0;
        let pk: Vec<C64> = g.k().iter().map(|k| C64::new((-k.abs() * x).exp(), 0.0)).collect();
        let s = Slice::from_modes(vec![pk]).unwrap();
        let h = g.inverse(hilbert(&g, &s).mode(0)).unwrap();
        // Periodized conjugate kernel: compare only near the centre where the
        // image sums are negligible relative to the tolerance.
        for (j, &y) in g.y().iter().enumerate() {
            if y.abs() < 20.0 {
                let want = y / (std::f64::consts::PI * (x * x + y * y));
                assert!((h[j].re - want).abs() < 2e-4, "y={y}");
            }
        }
    }

    #[test]
    fn hilbert_of_even_is_odd() {
        let g = grid();
        let h = hilbert(&g, &slice_of(&g, f0));
        assert!((&h + &reflect(&g, &h)).max_abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn derivative_inverts_i(a in -2.0f64..2.0, b in 0.5f64..3.0, c in -1.0f64..1.0) {
            let g = grid();
            // zero-mean: derivative of a Gaussian mixture
            let s = derivative(&g, &slice_of(&g, |y| a * (-(y - c) * (y - c) / b).exp() + (-y * y).exp()));
            let back = derivative(&g, &op_i(&g, &s, 1e-10).unwrap());
            prop_assert!((&back - &s).max_abs() < 1e-12);
        }

        #[test]
        fn hilbert_twice_is_minus_identity_off_zero(a in -2.0f64..2.0, c in -3.0f64..3.0) {
            let g = grid();
            let s = slice_of(&g, |y| (1.0 + a * y) * (-(y - c) * (y - c) / 2.0).exp());
            let hh = hilbert(&g, &hilbert(&g, &s));
            let want = s.map(|_, m, v| if m == 0 || m == g.nyquist() { ZERO } else { -v });
            prop_assert!((&hh - &want).max_abs() < 1e-15);
            // isometry off k = 0
            let e0: f64 = s.data().iter().enumerate().filter(|(m, _)| *m != 0 && *m != g.nyquist()).map(|(_, c)| c.norm_sqr()).sum();
            let e1: f64 = hilbert(&g, &s).data().iter().map(|c| c.norm_sqr()).sum();
            prop_assert!((e0 - e1).abs() <= 1e-13 * e0.max(1e-300));
        }
    }
}

//! The multipliers L̂₁ = k²/(k²+(nS)²) and L̂₂ = k·nS/(k²+(nS)²).
//!
//! For a = |nS| > 0 the kernels are L₁ − 1 = −(a/2)e^{−a|y|} and
//! L₂ = −(i·nS/2)·sgn(y)·e^{−a|y|}; both have unit L¹ norm, which by Young's
//! inequality bounds the L^p → L^p norms.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

use super::physical::{Layout, Sampled};
use super::report::{ExactCheck, VerifyReport};
use super::VerifyConfig;
use crate::kernels::{multiplier_symbol, Multiplier};

/// Tolerance on the unit L¹ norms: the kernels have a kink (L₁) or a jump
/// (L₂) at y = 0, so the truncated-symbol kernel converges like 1/k_max.
const KERNEL_L1_TOL: f64 = 2e-3;

fn mult(id: Multiplier, k: f64, ns: f64) -> C64 {
    multiplier_symbol(id, k, ns).expect("L1, L2 are defined everywhere")
}

/// Physical kernel of a multiplier symbol on a fixed fine layout.
fn kernel(sym: &dyn Fn(f64) -> C64, a: f64) -> Sampled {
    let layout = Layout { half_width: 60.0 / a.min(1.0), n: 1 << 21 };
    let n = layout.n;
    let norm = layout.dk() / (2.0 * PI);
    let mut buf: Vec<C64> = (0..n)
        .map(|m| {
            if m == n / 2 {
                return C64::new(0.0, 0.0);
            }
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sym(layout.k(m)) * (sign * norm)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    Sampled { layout, values: buf, model: None }
}

/// Coefficients of a random complex band-limited periodic field on n
/// points over [−ℓ, ℓ) (one temporal mode), even in y when `even`.
fn random_field(rng: &mut ChaCha8Rng, n: usize, half: f64, even: bool) -> Vec<C64> {
    let dk = PI / half;
    let mut c = vec![C64::new(0.0, 0.0); n];
    let mut draw = |k: f64| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * (-k * k / 8.0).exp();
    c[0] = draw(0.0);
    for m in 1..n / 8 {
        let k = m as f64 * dk;
        c[m] = draw(k);
        c[n - m] = if even { c[m] } else { draw(k) };
    }
    c
}

/// Coefficients of the complex conjugate field.
fn conj_coeffs(c: &[C64]) -> Vec<C64> {
    let n = c.len();
    (0..n).map(|m| c[(n - m) % n].conj()).collect()
}

struct Spectral {
    n: usize,
    half: f64,
}

impl Spectral {
    fn k(&self, m: usize) -> f64 {
        let mm = if m < self.n / 2 { m as f64 } else { m as f64 - self.n as f64 };
        mm * PI / self.half
    }
    /// Values on y_j = −ℓ + j·dy from coefficients c_m of e^{−ik_m y}.
    fn to_physical(&self, c: &[C64]) -> Vec<C64> {
        let mut buf: Vec<C64> =
            c.iter().enumerate().map(|(m, &v)| if m % 2 == 0 { v } else { -v }).collect();
        FftPlanner::new().plan_fft_forward(self.n).process(&mut buf);
        buf
    }
    fn norm(&self, v: &[C64], p: f64) -> f64 {
        let dy = 2.0 * self.half / self.n as f64;
        if p.is_infinite() {
            v.iter().map(|z| z.norm()).fold(0.0, f64::max)
        } else {
            (v.iter().map(|z| z.norm().powf(p)).sum::<f64>() * dy).powf(1.0 / p)
        }
    }
}

/// Lemma onLALB, plus the n = 0 identities and the parity of L₂.
pub fn check_l_operators(cfg: &VerifyConfig, seed: u64) -> VerifyReport {
    let mut rep = VerifyReport::default();
    let s = cfg.strouhal;

    // n = 0: L₁ = 1 and L₂ = 0 exactly on a k-lattice.
    let mut dev = 0.0f64;
    for i in -400..=400 {
        let k = i as f64 * 0.05;
        dev = dev.max((mult(Multiplier::L1, k, 0.0) - 1.0).norm()).max(mult(Multiplier::L2, k, 0.0).norm());
    }
    rep.exact.push(ExactCheck::new("onLALB", "n=0: max |L1 - 1| + |L2| on k-lattice", dev, 0.0, 0.0));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sp = Spectral { n: 4096, half: 200.0 };
    for &n in cfg.modes.iter().filter(|&&n| n > 0) {
        let ns = n as f64 * s;
        let a = ns.abs();
        let k1 = kernel(&|k| mult(Multiplier::L1, k, ns) - 1.0, a).lp(1.0, 0.0);
        let k2 = kernel(&|k| mult(Multiplier::L2, k, ns), a).lp(1.0, 0.0);
        rep.exact.push(ExactCheck::new("onLALB", &format!("||L1 - 1||_1 kernel, n={n}"), k1, 1.0, KERNEL_L1_TOL));
        rep.exact.push(ExactCheck::new("onLALB", &format!("||L2||_1 kernel, n={n}"), k2, 1.0, KERNEL_L1_TOL));

        // Young: ‖(L−)f‖_p ≤ ‖kernel‖₁‖f‖_p on random band-limited fields.
        let mut worst = 0.0f64;
        let mut parity = 0.0f64;
        let mut reality = 0.0f64;
        for trial in 0..8 {
            let even = trial % 2 == 0;
            let c = random_field(&mut rng, sp.n, sp.half, even);
            let f = sp.to_physical(&c);
            for (id, bound) in [(Multiplier::L1, k1), (Multiplier::L2, k2)] {
                let apply = |c: &[C64], ns: f64| -> Vec<C64> {
                    let g: Vec<C64> = c
                        .iter()
                        .enumerate()
                        .map(|(m, &z)| {
                            let sym = mult(id, sp.k(m), ns);
                            z * if id == Multiplier::L1 { sym - 1.0 } else { sym }
                        })
                        .collect();
                    sp.to_physical(&g)
                };
                let gy = apply(&c, ns);
                // Mode −n of a real flow is the conjugate of mode n.
                let gm = apply(&conj_coeffs(&c), -ns);
                for p in [1.0, 2.0, f64::INFINITY] {
                    worst = worst.max(sp.norm(&gy, p) / (sp.norm(&f, p) * bound));
                }
                let dev = gy.iter().zip(&gm).map(|(a, b)| (a.conj() - b).norm()).fold(0.0, f64::max);
                reality = reality.max(dev / sp.norm(&gy, f64::INFINITY));
                if even && id == Multiplier::L2 {
                    // y_j ↦ −y_j is j ↦ n − j on this grid (y_0 = −ℓ).
                    let odd = (1..sp.n).map(|j| (gy[j] + gy[sp.n - j]).norm()).fold(0.0, f64::max);
                    parity = parity.max(odd / sp.norm(&gy, f64::INFINITY));
                }
            }
        }
        rep.exact.push(ExactCheck::new(
            "onLALB",
            &format!("n={n}: max ||Lf||_p / (||kernel||_1 ||f||_p), p in {{1,2,inf}}"),
            worst.max(1.0),
            1.0,
            KERNEL_L1_TOL,
        ));
        rep.exact.push(ExactCheck::new("onLALB", &format!("n={n}: L2 maps even fields to odd"), parity, 0.0, 1e-12));
        rep.exact.push(ExactCheck::new("onLALB", &format!("n={n}: L1, L2 preserve reality"), reality, 0.0, 1e-12));
    }
    rep
}

//! Kernel-norm estimates: the envelope table and its evaluation.
//!
//! Every row is pure data — a field (kernel, derivative order, symbol
//! family) and the asserted norms ‖|y|^β · (factor) · K_n(x)‖_p ≤
//! C · prefactor · ⟨x⟩^{σ₁} x^{−σ₂} — so the table reads line by line
//! against the estimates it encodes.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::physical::{sample, Family};
use super::report::{bracket, power_envelope, BoundCheck, ExactCheck, Sample, VerifyReport};
use super::VerifyConfig;
use crate::kernels::{b, symbol, KernelId};

pub type SymbolFn = Arc<dyn Fn(f64, f64, f64) -> C64 + Send + Sync>;

/// Which temporal modes a norm is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modes {
    All,
    /// n = 0 only (the P₀ projection).
    Mean,
    /// n ≠ 0 only (the P projection).
    Oscillating,
}

impl Modes {
    fn admits(self, n: i32) -> bool {
        match self {
            Modes::All => true,
            Modes::Mean => n == 0,
            Modes::Oscillating => n != 0,
        }
    }
}

/// ‖|y|^β · w(x) · K_n(x)‖_p ≤ C · prefactor · ⟨x⟩^{σ₁} x^{−σ₂}, where on
/// n ≠ 0 modes w(x) = e^{−damping·b(S)x} (times ⟨Sx⟩ if `sx_weight`).
#[derive(Debug, Clone, Copy)]
pub struct NormSpec {
    pub p: f64,
    pub beta: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub modes: Modes,
    pub damping: f64,
    pub sx_weight: bool,
    pub prefactor: f64,
}

impl NormSpec {
    pub fn new(p: f64, sigma1: f64, sigma2: f64) -> Self {
        NormSpec { p, beta: 0.0, sigma1, sigma2, modes: Modes::All, damping: 0.0, sx_weight: false, prefactor: 1.0 }
    }
    pub fn weight(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }
    pub fn modes(mut self, modes: Modes) -> Self {
        self.modes = modes;
        self
    }
    pub fn damped(mut self, d: f64) -> Self {
        self.damping = d;
        self
    }
    pub fn sx(mut self) -> Self {
        self.sx_weight = true;
        self
    }
    pub fn prefactor(mut self, c: f64) -> Self {
        self.prefactor = c;
        self
    }

    fn describe(&self, label: &str) -> String {
        let p = if self.p.is_infinite() { "inf".to_string() } else { super::report::frac(self.p) };
        let mut q = String::new();
        if self.sx_weight {
            q.push_str("<Sx> ");
        }
        if self.damping != 0.0 {
            q.push_str(&format!("e^(-b(S)x*{}) ", super::report::frac(self.damping)));
        }
        match self.modes {
            Modes::Mean => q.push_str("P0 "),
            Modes::Oscillating => q.push_str("P "),
            Modes::All => {}
        }
        if self.beta != 0.0 {
            q.push_str(&format!("|y|^{} ", super::report::frac(self.beta)));
        }
        format!("||{q}{label}||_{p}")
    }

    fn envelope_text(&self) -> String {
        let e = power_envelope(self.sigma1, self.sigma2);
        if self.prefactor != 1.0 {
            format!("{:.4e} * {e}", self.prefactor)
        } else {
            e
        }
    }

    fn envelope(&self, x: f64) -> f64 {
        self.prefactor * bracket(x).powf(self.sigma1) * x.powf(-self.sigma2)
    }
}

/// A kernel field with the norms asserted on it.
#[derive(Clone)]
pub struct FieldSpec {
    pub lemma: &'static str,
    pub label: String,
    /// The kernel the row is about (for selecting rows by kernel).
    pub base: KernelId,
    pub family: Family,
    /// Symbol as a function of (x, k, nS).
    pub symbol: SymbolFn,
    pub norms: Vec<NormSpec>,
}

/// (−ik)^m · K̂_id(x, k, nS).
pub fn kernel_symbol(id: KernelId, m: u32) -> SymbolFn {
    Arc::new(move |x, k, ns| C64::new(0.0, -k).powu(m) * symbol(id, x, k, ns).expect("x ≥ 0"))
}

fn dlabel(label: &str, m: u32) -> String {
    match m {
        0 => label.to_string(),
        1 => format!("dy {label}"),
        _ => format!("dy^{m} {label}"),
    }
}

fn field(lemma: &'static str, id: KernelId, m: u32, label: &str, norms: Vec<NormSpec>) -> FieldSpec {
    let family = match id {
        KernelId::F | KernelId::G | KernelId::FStar | KernelId::GStar | KernelId::K0 => Family::Poisson,
        _ => Family::Smooth,
    };
    FieldSpec { lemma, label: dlabel(label, m), base: id, family, symbol: kernel_symbol(id, m), norms }
}

const BETAS: [f64; 3] = [1.0, 2.0, 3.0];
const XI2: [f64; 3] = [0.25, 0.625, 1.0];
const XI3: [f64; 3] = [1.0, 1.75, 2.5];
const P_GE2: [f64; 3] = [2.0, 4.0, f64::INFINITY];

fn n(p: f64, s1: f64, s2: f64) -> NormSpec {
    NormSpec::new(p, s1, s2)
}

/// ‖|y|^β ·‖₂ rows for β ∈ {1, 2, 3}, with σ₁, σ₂ affine in β.
fn weighted(s1: (f64, f64), s2: (f64, f64)) -> Vec<NormSpec> {
    BETAS.iter().map(|&bt| n(2.0, s1.0 + s1.1 * bt, s2.0 + s2.1 * bt).weight(bt)).collect()
}

/// Rows of the kernel estimates, each also asserted for e^{−b(S)x·d}·P K
/// on the oscillating modes (d = `damping`).
fn with_damping(rows: Vec<NormSpec>, damping: f64) -> Vec<NormSpec> {
    rows.into_iter()
        .flat_map(|r| [r.modes(Modes::Mean), r.modes(Modes::Oscillating).damped(damping)])
        .collect()
}

/// The envelope table for the Oseen-rate and Poisson-rate kernels.
pub fn kernel_table(strouhal: f64) -> Vec<FieldSpec> {
    use KernelId::*;
    let q = 0.25;
    let mut t = Vec::new();

    // Lemma kernelun.
    let mut k1 = vec![n(1.0, 0.0, 0.0), n(f64::INFINITY, 0.5, 1.0)];
    k1.extend(weighted((-0.25, 0.5), (0.0, 0.0)));
    t.push(field("kernelun", K1, 0, "K1", with_damping(k1, q)));
    let mut dk1 = vec![n(1.0, 0.5, 1.0), n(f64::INFINITY, 1.0, 2.0)];
    dk1.extend(weighted((-0.75, 0.5), (0.0, 0.0)));
    t.push(field("kernelun", K1, 1, "K1", with_damping(dk1, q)));
    t.push(field("kernelun", K1, 2, "K1", with_damping(vec![n(f64::INFINITY, 1.5, 3.0), n(1.0, 1.0, 2.0)], q)));
    let mut k2 = vec![n(1.0, 0.0, 0.5), n(f64::INFINITY, 0.0, 1.0)];
    k2.extend(weighted((-0.75, 0.5), (0.0, 0.0)));
    t.push(field("kernelun", K2, 0, "K2", with_damping(k2, q)));
    t.push(field("kernelun", K2, 1, "K2", with_damping(vec![n(f64::INFINITY, 0.5, 2.0), n(1.0, 0.5, 1.5)], q)));
    t.push(field("kernelun", K5, 0, "K5", with_damping(vec![n(1.0, 0.0, 0.5), n(2.0, 0.0, 0.25).weight(1.0)], q)));
    t.push(field("kernelun", K6, 0, "K6", with_damping(vec![n(1.0, 0.0, 0.5), n(2.0, 0.0, 0.25).weight(1.0)], q)));
    t.push(field("kernelun", K7, 0, "K7", with_damping(vec![n(1.0, 0.25, 0.25), n(2.0, 0.5, 0.25).weight(1.0)], q)));

    // Lemma kerneldeux, ξ₂ and ξ₃ at both endpoints and the midpoint.
    let mut k8: Vec<NormSpec> = XI2.iter().map(|&x2| n(1.0, 0.0, x2)).collect();
    k8.extend(XI3.iter().map(|&x3| n(2.0, 0.0, x3 / 2.0)));
    k8.push(n(f64::INFINITY, 0.5, 2.0));
    k8.extend(weighted((-1.25, 0.5), (0.0, 0.0)));
    t.push(field("kerneldeux", K8, 0, "K8", with_damping(k8, q)));
    let mut dk8 = vec![n(f64::INFINITY, 1.0, 3.0)];
    dk8.extend(weighted((-0.75, 0.5), (1.0, 0.0)));
    dk8.extend(XI3.iter().map(|&x3| n(1.0, 0.25, (1.0 + x3) / 2.0)));
    t.push(field("kerneldeux", K8, 1, "K8", with_damping(dk8, q)));

    // Lemma kerneldeuxx: the damping factor is part of every estimate.
    let all = |v: Vec<NormSpec>| v.into_iter().map(|r| r.damped(q)).collect::<Vec<_>>();
    let mut k10 = vec![n(f64::INFINITY, 0.0, 1.0), n(2.0, 0.0, 0.75), n(1.0, 0.125, 0.625)];
    k10.extend(weighted((0.375, 0.125), (-1.125, 0.375)));
    t.push(field("kerneldeuxx", K10, 0, "K10", all(k10)));
    t.push(field("kerneldeuxx", K10, 1, "K10", all(vec![n(f64::INFINITY, 0.5, 2.0), n(1.0, 0.625, 1.625)])));

    // Lemma withkr.
    let dp = |p: f64| n(p, 1.0 - 0.5 / p, 2.0 - 1.0 / p);
    let k12 = vec![n(f64::INFINITY, 0.5, 1.0), n(2.0, 0.25, 0.5)];
    t.push(field("withkr", K12, 0, "K12", with_damping(k12.clone(), q)));
    t.push(field("withkr", K12, 1, "K12", with_damping(P_GE2.iter().map(|&p| dp(p)).collect(), q)));
    t.push(field("withkr", K13, 0, "K13", k12.iter().map(|r| r.damped(0.5)).collect()));
    t.push(field("withkr", K13, 1, "K13", P_GE2.iter().map(|&p| dp(p).damped(0.5)).collect()));

    // Lemma withki.
    for (id, label) in [(Kr, "Kr"), (Ki, "Ki")] {
        t.push(field("withki", id, 0, label, vec![n(f64::INFINITY, 0.5, 1.0).damped(q)]));
        t.push(field("withki", id, 1, label, P_GE2.iter().map(|&p| dp(p).damped(q)).collect()));
    }

    // Lemma sourcelikeesti.
    let s_quarter = strouhal.abs().powf(-0.25);
    for (id, label) in [(F, "F"), (G, "G")] {
        for m in 0..=2u32 {
            let mut rows = Vec::new();
            if m == 0 {
                // p > 1; P₀G is not integrable.
                rows.extend([1.5, 2.0, 4.0, f64::INFINITY].iter().map(|&p| n(p, 0.0, 1.0 - 1.0 / p).modes(Modes::Mean)));
                rows.push(n(1.0, 0.0, 0.25).modes(Modes::Oscillating).prefactor(s_quarter));
            }
            for &p in &P_GE2 {
                let r = n(p, 0.0, 1.0 + m as f64 - 1.0 / p);
                rows.push(r);
                rows.push(r.modes(Modes::Oscillating).sx());
            }
            t.push(field("sourcelikeesti", id, m, label, rows));
        }
    }
    t
}

/// Lemma alittlelemma and Lemma univ (n = 0 only).
pub fn heat_table() -> Vec<FieldSpec> {
    use KernelId::*;
    let mut t = Vec::new();
    let mean = |v: Vec<NormSpec>| v.into_iter().map(|r| r.modes(Modes::Mean)).collect::<Vec<_>>();
    let diff = |a: KernelId, b: KernelId, sign: f64, m: u32, mb: u32| -> SymbolFn {
        Arc::new(move |x, k, ns| {
            let dk = C64::new(0.0, -k);
            dk.powu(m) * symbol(a, x, k, ns).unwrap() + sign * dk.powu(mb) * symbol(b, x, k, ns).unwrap()
        })
    };
    for m in 0..=2u32 {
        let mf = m as f64;
        let mut norms = vec![n(f64::INFINITY, (mf + 5.0) / 2.0, mf + 4.0)];
        if m == 1 {
            norms.push(n(1.0, 3.0, 4.5));
        }
        t.push(FieldSpec {
            lemma: "alittlelemma",
            label: dlabel("(K1 - Kc)", m),
            base: K1,
            family: Family::Smooth,
            symbol: diff(K1, Kc, -1.0, m, m),
            norms: mean(norms),
        });
        t.push(FieldSpec {
            lemma: "alittlelemma",
            label: dlabel("(K12 + Kc)", m),
            base: K12,
            family: Family::Smooth,
            symbol: diff(K12, Kc, 1.0, m, m),
            norms: mean(vec![n(f64::INFINITY, (mf + 5.0) / 2.0, mf + 4.0)]),
        });
    }
    t.push(FieldSpec {
        lemma: "alittlelemma",
        label: "K2 - dy Kc".into(),
        base: K2,
        family: Family::Smooth,
        symbol: diff(K2, Kc, -1.0, 0, 1),
        norms: mean(vec![n(f64::INFINITY, 3.0, 5.0)]),
    });

    // Moment expansion on Gaussian test data f = e^{−(y−c)²/4s}/√(4πs),
    // f̂ = e^{ikc − k²s}: M(f) = 1, M(yf) = c.
    for &c in &[0.5, 2.0] {
        let s = 1.0;
        let fhat = move |k: f64| C64::from_polar((-k * k * s).exp(), k * c);
        let gauss = move |y: f64| (-(y - c).powi(2) / (4.0 * s)).exp() / (4.0 * std::f64::consts::PI * s).sqrt();
        let m1 = abs_moment(&gauss, 1.0);
        let m2 = abs_moment(&gauss, 2.0);
        for m in 0..=1u32 {
            let mf = m as f64;
            // ∂^m K₁ (f − M(f)): γ = 1 lines (sup and L²).
            let sym: SymbolFn = Arc::new(move |x, k, ns| {
                C64::new(0.0, -k).powu(m) * symbol(K1, x, k, ns).unwrap() * (fhat(k) - 1.0)
            });
            t.push(FieldSpec {
                lemma: "univ",
                label: format!("{}(f - M(f)), f = G(y-{c})", dlabel("K1", m)),
                base: K1,
                family: Family::Smooth,
                symbol: sym,
                norms: mean(vec![
                    n(f64::INFINITY, (2.0 + mf) / 2.0, 2.0 + mf).prefactor(m1),
                    n(2.0, 0.25 + (mf + 1.0) / 2.0, 1.5 + mf).prefactor(m1),
                ]),
            });
        }
        // Dipole-corrected residual K(f − M(f)) + ∂_yK·M(yf): γ₂ = 2.
        for (id, label) in [(K1, "K1"), (K12, "K12")] {
            let sym: SymbolFn = Arc::new(move |x, k, ns| {
                symbol(id, x, k, ns).unwrap() * (fhat(k) - 1.0 - C64::new(0.0, k * c))
            });
            t.push(FieldSpec {
                lemma: "univ",
                label: format!("{label}(f - M(f)) + dy {label} M(yf), f = G(y-{c})"),
                base: id,
                family: Family::Smooth,
                symbol: sym,
                norms: mean(vec![n(f64::INFINITY, 1.5, 3.0).prefactor(m2)]),
            });
        }
    }
    // f = ∂²_y of a Gaussian: M(f) = M(yf) = 0, so K₁f is the residual itself.
    {
        let (c, s) = (1.0, 1.0);
        let g2 = move |y: f64| {
            let z = y - c;
            (z * z / (4.0 * s * s) - 1.0 / (2.0 * s)) * (-z * z / (4.0 * s)).exp() / (4.0 * std::f64::consts::PI * s).sqrt()
        };
        let m2 = abs_moment(&g2, 2.0);
        let sym: SymbolFn =
            Arc::new(move |x, k, ns| -k * k * C64::from_polar((-k * k * s).exp(), k * c) * symbol(K1, x, k, ns).unwrap());
        t.push(FieldSpec {
            lemma: "univ",
            label: "K1 f, f = dy^2 G(y-1) (zero mass and first moment)".into(),
            base: K1,
            family: Family::Smooth,
            symbol: sym,
            norms: mean(vec![n(f64::INFINITY, 1.5, 3.0).prefactor(m2)]),
        });
    }
    t
}

/// ‖|y|^γ f‖₁ by the trapezoid rule on [−60, 60].
fn abs_moment(f: &dyn Fn(f64) -> f64, gamma: f64) -> f64 {
    let n = 120_000;
    let h = 120.0 / n as f64;
    (0..=n).map(|i| -60.0 + i as f64 * h).map(|y| y.abs().powf(gamma) * f(y).abs()).sum::<f64>() * h
}

/// Evaluate every norm of every field over the sweep.
pub fn run_fields(cfg: &VerifyConfig, fields: &[FieldSpec]) -> Vec<BoundCheck> {
    let s = cfg.strouhal;
    let bs = b(s);
    let mut out = Vec::new();
    for f in fields {
        let mut samples: Vec<Vec<Sample>> = vec![Vec::new(); f.norms.len()];
        for &nn in &cfg.modes {
            if !f.norms.iter().any(|r| r.modes.admits(nn)) {
                continue;
            }
            let ns = nn as f64 * s;
            let scale = if ns == 0.0 { 1.0 } else { ns.abs() };
            for &x in &cfg.xs {
                let sym = |k: f64| (f.symbol)(x, k, ns);
                let k = sample(&sym, f.family, x, scale);
                for (r, out) in f.norms.iter().zip(samples.iter_mut()) {
                    if !r.modes.admits(nn) {
                        continue;
                    }
                    let mut w = 1.0;
                    if nn != 0 {
                        w *= (-r.damping * bs * x).exp();
                        if r.sx_weight {
                            w *= bracket(s * x);
                        }
                    }
                    out.push(Sample::new(x, ns, w * k.lp(r.p, r.beta), r.envelope(x)));
                }
            }
        }
        for (r, smp) in f.norms.iter().zip(samples) {
            out.push(BoundCheck::assess(f.lemma, r.describe(&f.label), r.envelope_text(), smp));
        }
    }
    out
}

/// ‖K₀(x)‖_{L¹} = 1 at every sampled x (worst deviation reported).
pub fn k0_unit_mass(cfg: &VerifyConfig) -> ExactCheck {
    let field = kernel_symbol(KernelId::K0, 0);
    let worst = cfg
        .xs
        .iter()
        .map(|&x| {
            let sym = |k: f64| field(x, k, 0.0);
            sample(&sym, Family::Poisson, x, 1.0).lp(1.0, 0.0)
        })
        .max_by(|a, b| (a - 1.0).abs().total_cmp(&(b - 1.0).abs()))
        .unwrap_or(f64::NAN);
    ExactCheck::new("sourcelikeesti", "||K0(x)||_1 (worst over x)", worst, 1.0, super::QUAD_TOL)
}

/// Rows of `kernel_table` whose base kernel is in `ids`, plus the K₀ mass.
pub fn check_kernel_norms(cfg: &VerifyConfig, ids: &[KernelId]) -> VerifyReport {
    let rows: Vec<FieldSpec> = kernel_table(cfg.strouhal).into_iter().filter(|f| ids.contains(&f.base)).collect();
    let mut rep = VerifyReport { bounds: run_fields(cfg, &rows), exact: Vec::new() };
    if ids.contains(&KernelId::K0) {
        rep.exact.push(k0_unit_mass(cfg));
    }
    rep
}

/// Lemma alittlelemma heat limits and Lemma univ moment residuals.
pub fn check_heat_limits(cfg: &VerifyConfig) -> VerifyReport {
    VerifyReport { bounds: run_fields(cfg, &heat_table()), exact: Vec::new() }
}

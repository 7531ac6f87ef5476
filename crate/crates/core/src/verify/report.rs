//! Boundedness checks, exact checks and the tabular report.

use std::fmt::Write as _;

/// Largest tolerated log-log slope of the sampled/envelope ratio at either
/// end of the sweep.  A wrong envelope exponent shows up as a slope of at
/// least the exponent error (typically ≥ 1/8), so 0.1 separates the two.
pub const TREND_TOL: f64 = 0.1;

/// Ratios below this fraction of the fitted constant are treated as
/// negligible when fitting end trends (exponentially damped modes).
const NEGLIGIBLE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    /// Sweep abscissa: the separation x (or |nS| for sweeps in the frequency).
    pub x: f64,
    pub ns: f64,
    pub value: f64,
    pub envelope: f64,
    pub ratio: f64,
}

impl Sample {
    pub fn new(x: f64, ns: f64, value: f64, envelope: f64) -> Self {
        Sample { x, ns, value, envelope, ratio: value / envelope }
    }
}

/// One asserted estimate: a sampled quantity against its envelope.
#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub lemma: String,
    pub quantity: String,
    pub envelope: String,
    pub samples: Vec<Sample>,
    /// max sampled/envelope ratio.
    pub fitted_c: f64,
    /// log-log slope of sup_n ratio over the first decade of the sweep.
    pub slope_low: f64,
    /// log-log slope of sup_n ratio over the last decade of the sweep.
    pub slope_high: f64,
    /// TREND_TOL minus the larger end trend (see [`projected_rise`]);
    /// non-negative iff no divergence trend.
    pub margin: f64,
    pub pass: bool,
}

impl BoundCheck {
    pub fn assess(lemma: &str, quantity: String, envelope: String, samples: Vec<Sample>) -> Self {
        let finite = samples.iter().all(|s| s.ratio.is_finite() && s.ratio >= 0.0);
        let fitted_c = samples.iter().map(|s| s.ratio).fold(0.0, f64::max);
        // sup over nS at each positive abscissa.
        let mut xs: Vec<f64> = samples.iter().map(|s| s.x).filter(|&x| x > 0.0).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let sup: Vec<(f64, f64)> = xs
            .iter()
            .map(|&x| (x, samples.iter().filter(|s| s.x == x).map(|s| s.ratio).fold(0.0, f64::max)))
            .collect();
        let floor = NEGLIGIBLE * fitted_c;
        let decade = |a: f64, b: f64| -> Option<f64> {
            let pts: Vec<(f64, f64)> = sup
                .iter()
                .filter(|(x, r)| *x >= a * (1.0 - 1e-12) && *x <= b * (1.0 + 1e-12) && *r > floor)
                .map(|(x, r)| (x.ln(), r.ln()))
                .collect();
            (pts.len() >= 3).then(|| slope(&pts))
        };
        let (lo, hi) = (xs.first().copied().unwrap_or(1.0), xs.last().copied().unwrap_or(1.0));
        // Slopes oriented so that positive means growth towards the sweep end.
        let s_low = [decade(lo, lo * 10.0).map(|v| -v), decade(lo * 10.0, lo * 100.0).map(|v| -v)];
        let s_high = [decade(hi / 10.0, hi), decade(hi / 100.0, hi / 10.0)];
        let trend_low = projected_rise(s_low[0], s_low[1]);
        let trend_high = projected_rise(s_high[0], s_high[1]);
        let slope_low = s_low[0].map(|v| -v).unwrap_or(0.0);
        let slope_high = s_high[0].unwrap_or(0.0);
        let margin = TREND_TOL - trend_low.max(trend_high);
        let pass = finite && fitted_c.is_finite() && margin >= 0.0;
        BoundCheck {
            lemma: lemma.to_string(),
            quantity,
            envelope,
            samples,
            fitted_c,
            slope_low,
            slope_high,
            margin,
            pass,
        }
    }
}

/// Trend measure at one end of the sweep from the slope of log ratio per
/// decade in the end decade (`last`) and the one before it (`prev`), both
/// oriented so that positive means growth towards the end.
///
/// A power-law divergence keeps a constant slope; a ratio saturating to
/// its bound has slopes shrinking geometrically by q = last/prev < 1, so its
/// further rise beyond the sweep is at most last·q/(1−q) (in log ratio per
/// ln 10).  The trend is the smaller of the end slope and that projection.
pub fn projected_rise(last: Option<f64>, prev: Option<f64>) -> f64 {
    let Some(last) = last else { return 0.0 };
    if last <= 0.0 {
        return last;
    }
    match prev {
        Some(prev) if prev > last => {
            let q = last / prev;
            last.min(last * q / (1.0 - q))
        }
        _ => last,
    }
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// A quantity with a known exact value.
#[derive(Debug, Clone)]
pub struct ExactCheck {
    pub lemma: String,
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub tol: f64,
    pub pass: bool,
}

impl ExactCheck {
    pub fn new(lemma: &str, name: &str, value: f64, expected: f64, tol: f64) -> Self {
        let pass = (value - expected).abs() <= tol;
        ExactCheck { lemma: lemma.to_string(), name: name.to_string(), value, expected, tol, pass }
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub bounds: Vec<BoundCheck>,
    pub exact: Vec<ExactCheck>,
}

impl VerifyReport {
    pub fn merge(&mut self, other: VerifyReport) {
        self.bounds.extend(other.bounds);
        self.exact.extend(other.exact);
    }

    pub fn passed(&self) -> bool {
        self.bounds.iter().all(|b| b.pass) && self.exact.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> Vec<String> {
        let b = self.bounds.iter().filter(|b| !b.pass).map(|b| format!("{} {}", b.lemma, b.quantity));
        let e = self.exact.iter().filter(|e| !e.pass).map(|e| format!("{} {}", e.lemma, e.name));
        b.chain(e).collect()
    }

    /// Tab-separated table: lemma, quantity, envelope, fitted C, margin, pass.
    pub fn table(&self) -> String {
        let mut s = String::from("lemma\tquantity\tenvelope\tfitted_C\tmargin\tpass\n");
        for b in &self.bounds {
            let _ = writeln!(
                s,
                "{}\t{}\t{}\t{:.6e}\t{:.4}\t{}",
                b.lemma,
                b.quantity,
                b.envelope,
                b.fitted_c,
                b.margin,
                if b.pass { "PASS" } else { "FAIL" }
            );
        }
        for e in &self.exact {
            let _ = writeln!(
                s,
                "{}\t{}\t= {}\t{:.12e}\t{:.3e}\t{}",
                e.lemma,
                e.name,
                e.expected,
                e.value,
                e.tol - (e.value - e.expected).abs(),
                if e.pass { "PASS" } else { "FAIL" }
            );
        }
        s
    }
}

/// Format an exponent as a small fraction where possible (1/2, −3/4, 13/8).
pub fn frac(v: f64) -> String {
    for den in [1i64, 2, 4, 8, 16] {
        let num = v * den as f64;
        if (num - num.round()).abs() < 1e-9 {
            let num = num.round() as i64;
            return if den == 1 { format!("{num}") } else { format!("{num}/{den}") };
        }
    }
    format!("{v:.4}")
}

/// "⟨x⟩^{σ₁} x^{−σ₂}" with trivial factors dropped.
pub fn power_envelope(sigma1: f64, sigma2: f64) -> String {
    let mut parts = Vec::new();
    if sigma1 != 0.0 {
        parts.push(format!("<x>^({})", frac(sigma1)));
    }
    if sigma2 != 0.0 {
        parts.push(format!("x^({})", frac(-sigma2)));
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(" ")
    }
}

/// ⟨x⟩ = √(1 + x²).
pub fn bracket(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

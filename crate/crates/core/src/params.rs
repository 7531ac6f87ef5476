//! Physical and numerical configuration, with the admissibility checks on
//! the function-space exponents.

use crate::error::{Result, WakeError};

/// Japanese bracket ⟨x⟩ = √(1+x²).
pub fn bracket(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    /// Strouhal number S (0 for a stationary flow).
    pub strouhal: f64,
    /// Inflow station.
    pub x0: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub phi: f64,
    pub eta: f64,
    pub xi: f64,
    pub beta: f64,
    /// Slack in the predicted decay rates, φ₀ = (1+ε)φ.
    pub epsilon: f64,
    /// Half-width L of the periodic y-domain [−L, L).
    pub half_width: f64,
    pub ny: usize,
    /// Largest retained temporal mode |n|.
    pub nt: usize,
    pub nx: usize,
    pub x_max: f64,
    /// Truncation threshold for exponentially damped upstream integrals.
    pub window_tol: f64,
    pub picard_tol: f64,
    pub max_sweeps: usize,
    /// Radius bound on the boundary data norm.
    pub rho: f64,
    /// Under-relaxation factor used after a non-contraction signal (1 = off).
    pub relaxation: f64,
    /// Relative tolerance for the zero-mean precondition of I.
    pub mean_tol: f64,
    /// When false the quadratic terms are dropped (linear regime).
    pub nonlinear: bool,
}

impl Default for Params {
    fn default() -> Self {
        Self::reference()
    }
}

impl Params {
    /// Reference configuration: Ny = 512, Nt = 2, Nx = 160 stations on
    /// [20, 2000].
    pub fn reference() -> Self {
        Params {
            strouhal: 2.0,
            x0: 20.0,
            p: 1.05,
            q: 2.0,
            r: 3.0,
            phi: 1.0 / 16.0,
            eta: 0.01,
            xi: 1.0 / 16.0,
            beta: 2.0,
            epsilon: 0.5,
            half_width: 400.0,
            ny: 512,
            nt: 2,
            nx: 160,
            x_max: 2000.0,
            window_tol: 1e-10,
            picard_tol: 1e-12,
            max_sweeps: 60,
            rho: 1e3,
            relaxation: 1.0,
            mean_tol: 1e-10,
            nonlinear: true,
        }
    }

    /// φ₀ = (1+ε)φ.
    pub fn phi0(&self) -> f64 {
        (1.0 + self.epsilon) * self.phi
    }

    /// Number of retained temporal modes, 2Nt+1.
    pub fn n_modes(&self) -> usize {
        2 * self.nt + 1
    }

    /// Names of the violated exponent inequalities (empty when admissible).
    pub fn restriction_violations(&self) -> Vec<&'static str> {
        restriction_violations(self.p, self.q, self.r, self.phi, self.eta, self.xi, self.beta)
    }

    /// ⟨S⟩/S ≤ ⟨x₀⟩^φ (vacuous for S = 0).
    pub fn strouhal_condition(&self) -> bool {
        self.strouhal == 0.0
            || bracket(self.strouhal) / self.strouhal <= bracket(self.x0).powf(self.phi)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(WakeError::InvalidParam(m.to_string()));
        if !(self.strouhal >= 0.0 && self.strouhal.is_finite()) {
            return bad("strouhal must be finite and >= 0");
        }
        if !(self.x0 >= 1.0 && self.x0.is_finite()) {
            return bad("x0 must be >= 1");
        }
        if self.strouhal == 0.0 && self.nt != 0 {
            return bad("nt must be 0 when strouhal = 0");
        }
        if self.ny < 8 || self.ny % 2 != 0 {
            return bad("ny must be even and >= 8");
        }
        if self.nx < 2 {
            return bad("nx must be >= 2");
        }
        if !(self.x_max > self.x0) {
            return bad("x_max must exceed x0");
        }
        if !(self.half_width > 0.0) {
            return bad("half_width must be positive");
        }
        if !(self.window_tol > 0.0 && self.window_tol < 1.0) {
            return bad("window_tol must lie in (0, 1)");
        }
        if !(self.picard_tol > 0.0) || self.max_sweeps == 0 {
            return bad("picard_tol must be positive and max_sweeps >= 1");
        }
        if !(self.relaxation > 0.0 && self.relaxation <= 1.0) {
            return bad("relaxation must lie in (0, 1]");
        }
        if !(self.rho > 0.0) || !(self.mean_tol > 0.0) || !(self.epsilon > 0.0) {
            return bad("rho, mean_tol and epsilon must be positive");
        }
        let v = self.restriction_violations();
        if !v.is_empty() {
            return Err(WakeError::Restriction(v.join("; ")));
        }
        if !self.strouhal_condition() {
            return Err(WakeError::Restriction(format!(
                "<S>/S <= <x0>^phi fails: {:.6} > {:.6}",
                bracket(self.strouhal) / self.strouhal,
                bracket(self.x0).powf(self.phi)
            )));
        }
        Ok(())
    }

    /// Log-uniform stations from x0 to x_max.
    pub fn stations(&self) -> Vec<f64> {
        log_stations(self.x0, self.x_max, self.nx)
    }
}

/// `n` log-uniformly spaced points from `a` to `b` inclusive.
pub fn log_stations(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                a
            } else if i == n - 1 {
                b
            } else {
                (la + (lb - la) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// The exponent inequalities of the solution class, checked by direct
/// substitution; returns the text of each violated inequality.
pub fn restriction_violations(
    p: f64,
    q: f64,
    r: f64,
    phi: f64,
    eta: f64,
    xi: f64,
    beta: f64,
) -> Vec<&'static str> {
    let checks: [(&'static str, bool); 14] = [
        ("13/7 <= beta", 13.0 / 7.0 <= beta),
        ("beta <= 3", beta <= 3.0),
        ("1 - 1/p < phi", 1.0 - 1.0 / p < phi),
        ("phi < 1/2", phi < 0.5),
        ("1 < p", 1.0 < p),
        ("p <= q", p <= q),
        ("r > 2", r > 2.0),
        ("1/2 >= xi", 0.5 >= xi),
        ("xi >= eta", xi >= eta),
        ("eta >= 0", eta >= 0.0),
        ("xi >= phi", xi >= phi),
        ("1/4 - phi/2 - eta > 0", 0.25 - phi / 2.0 - eta > 0.0),
        ("1/2 - (1 + 1/(2r)) phi > 0", 0.5 - (1.0 + 0.5 / r) * phi > 0.0),
        ("1/2 + xi - eta - 2 phi > 0", 0.5 + xi - eta - 2.0 * phi > 0.0),
    ];
    let last = ("1/2 + eta - xi - phi/r > 0", 0.5 + eta - xi - phi / r > 0.0);
    checks
        .iter()
        .chain(std::iter::once(&last))
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| *name)
        .collect()
}

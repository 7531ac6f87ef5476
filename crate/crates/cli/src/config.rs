//! `key = value` run configuration.
//!
//! Every physical and numerical parameter has the name of the corresponding
//! [`Params`] field; missing keys take the reference values.  Lines starting
//! with `#` and blank lines are ignored.  Unknown, duplicated or malformed
//! keys are rejected with their line number, and the resulting parameters
//! are checked (including the exponent restrictions) at load time.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use wake_core::solver::Family;
use wake_core::Params;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Solve,
    BoundaryFit,
    Extract,
    VerifyKernels,
    LinearCheck,
}

impl Mode {
    pub const ALL: [Mode; 5] = [Mode::Solve, Mode::BoundaryFit, Mode::Extract, Mode::VerifyKernels, Mode::LinearCheck];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Solve => "solve",
            Mode::BoundaryFit => "boundary-fit",
            Mode::Extract => "extract",
            Mode::VerifyKernels => "verify-kernels",
            Mode::LinearCheck => "linear-check",
        }
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Mode::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| {
            let names: Vec<_> = Mode::ALL.iter().map(|m| m.name()).collect();
            format!("unknown mode '{s}' (expected one of {})", names.join(", "))
        })
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Sweep used by `verify-kernels`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    /// 40 separations, n ∈ {0, ±1, ±2, ±5}.
    Full,
    /// 17 separations, n ∈ {0, 1, −2}.
    Coarse,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: Params,
    pub mode: Mode,
    pub family: Family,
    /// Peak of the time-averaged streamwise trace of the boundary data.
    pub amplitude: f64,
    pub out: PathBuf,
    pub seed: u64,
    /// Cross-section file for `boundary-fit` (forward-run traces when absent).
    pub trace: Option<PathBuf>,
    /// Output directory of an earlier run, read by `extract`.
    pub input: Option<PathBuf>,
    pub sweep: Sweep,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: Params::reference(),
            mode: Mode::Solve,
            family: Family::GaussianWake,
            amplitude: 0.01,
            out: PathBuf::from("out"),
            seed: 1,
            trace: None,
            input: None,
            sweep: Sweep::Full,
        }
    }
}

fn parse<T: FromStr>(v: &str, what: &str) -> std::result::Result<T, String> {
    v.parse().map_err(|_| format!("cannot parse '{v}' as {what}"))
}

fn parse_bool(v: &str) -> std::result::Result<bool, String> {
    match v {
        "true" | "on" | "yes" => Ok(true),
        "false" | "off" | "no" => Ok(false),
        _ => Err(format!("cannot parse '{v}' as a boolean")),
    }
}

impl RunConfig {
    /// Apply one `key = value` assignment.
    fn set(&mut self, key: &str, v: &str) -> std::result::Result<(), String> {
        let p = &mut self.params;
        let real = "a number";
        let count = "a non-negative integer";
        match key {
            "strouhal" => p.strouhal = parse(v, real)?,
            "x0" => p.x0 = parse(v, real)?,
            "p" => p.p = parse(v, real)?,
            "q" => p.q = parse(v, real)?,
            "r" => p.r = parse(v, real)?,
            "phi" => p.phi = parse(v, real)?,
            "eta" => p.eta = parse(v, real)?,
            "xi" => p.xi = parse(v, real)?,
            "beta" => p.beta = parse(v, real)?,
            "epsilon" => p.epsilon = parse(v, real)?,
            "half_width" => p.half_width = parse(v, real)?,
            "ny" => p.ny = parse(v, count)?,
            "nt" => p.nt = parse(v, count)?,
            "nx" => p.nx = parse(v, count)?,
            "x_max" => p.x_max = parse(v, real)?,
            "window_tol" => p.window_tol = parse(v, real)?,
            "picard_tol" => p.picard_tol = parse(v, real)?,
            "max_sweeps" => p.max_sweeps = parse(v, count)?,
            "rho" => p.rho = parse(v, real)?,
            "relaxation" => p.relaxation = parse(v, real)?,
            "mean_tol" => p.mean_tol = parse(v, real)?,
            "nonlinear" => p.nonlinear = parse_bool(v)?,
            "mode" => self.mode = v.parse()?,
            "family" => self.family = v.parse().map_err(|e: wake_core::WakeError| e.to_string())?,
            "amplitude" => self.amplitude = parse(v, real)?,
            "out" => self.out = PathBuf::from(v),
            "seed" => self.seed = parse(v, count)?,
            "trace" => self.trace = Some(PathBuf::from(v)),
            "input" => self.input = Some(PathBuf::from(v)),
            "verify_sweep" => {
                self.sweep = match v {
                    "full" => Sweep::Full,
                    "coarse" => Sweep::Coarse,
                    _ => return Err(format!("verify_sweep must be 'full' or 'coarse', got '{v}'")),
                }
            }
            _ => return Err(format!("unknown key '{key}'")),
        }
        Ok(())
    }

    /// Parse the text of a configuration file (without validating).
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen: Vec<(String, usize)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let Some((k, v)) = body.split_once('=') else {
                return Err(CliError::config(Some(line), format!("expected 'key = value', got '{body}'")));
            };
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || k.contains(char::is_whitespace) {
                return Err(CliError::config(Some(line), format!("malformed key '{k}'")));
            }
            if v.is_empty() {
                return Err(CliError::config(Some(line), format!("missing value for '{k}'")));
            }
            if let Some((_, first)) = seen.iter().find(|(s, _)| s == k) {
                return Err(CliError::config(Some(line), format!("duplicate key '{k}' (first set on line {first})")));
            }
            cfg.set(k, v).map_err(|m| CliError::config(Some(line), m))?;
            seen.push((k.to_string(), line));
        }
        Ok(cfg)
    }

    /// Parse and validate.
    pub fn load(text: &str) -> Result<Self> {
        let cfg = Self::parse_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parameter admissibility plus the driver-level settings.
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            return Err(CliError::config(None, "amplitude must be finite and >= 0"));
        }
        if self.mode == Mode::Extract && self.input.is_none() {
            return Err(CliError::config(None, "mode extract needs 'input' (the directory of an earlier run)"));
        }
        if self.mode == Mode::VerifyKernels && self.params.strouhal == 0.0 {
            return Err(CliError::config(None, "mode verify-kernels needs strouhal > 0"));
        }
        Ok(())
    }

    /// Canonical text form: every key, one per line, in a fixed order.
    /// Parsing it back yields the same configuration.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut s = String::from("# wake-config v1\n");
        let mut kv = |k: &str, v: String| s.push_str(&format!("{k} = {v}\n"));
        kv("mode", self.mode.name().into());
        kv("family", self.family.name().into());
        kv("amplitude", fmt_f64(self.amplitude));
        kv("seed", self.seed.to_string());
        kv("out", self.out.display().to_string());
        if let Some(t) = &self.trace {
            kv("trace", t.display().to_string());
        }
        if let Some(t) = &self.input {
            kv("input", t.display().to_string());
        }
        kv("verify_sweep", if self.sweep == Sweep::Full { "full" } else { "coarse" }.into());
        for (k, v) in [
            ("strouhal", p.strouhal),
            ("x0", p.x0),
            ("p", p.p),
            ("q", p.q),
            ("r", p.r),
            ("phi", p.phi),
            ("eta", p.eta),
            ("xi", p.xi),
            ("beta", p.beta),
            ("epsilon", p.epsilon),
            ("half_width", p.half_width),
            ("x_max", p.x_max),
            ("window_tol", p.window_tol),
            ("picard_tol", p.picard_tol),
            ("rho", p.rho),
            ("relaxation", p.relaxation),
            ("mean_tol", p.mean_tol),
        ] {
            kv(k, fmt_f64(v));
        }
        for (k, v) in [("ny", p.ny), ("nt", p.nt), ("nx", p.nx), ("max_sweeps", p.max_sweeps)] {
            kv(k, v.to_string());
        }
        kv("nonlinear", p.nonlinear.to_string());
        s
    }
}

/// Shortest representation that parses back to the same bits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_reference_configuration() {
        let c = RunConfig::load("# nothing\n\n").unwrap();
        assert_eq!(c.params, Params::reference());
        assert_eq!(c.mode, Mode::Solve);
    }

    #[test]
    fn keys_are_applied() {
        let c = RunConfig::load("mode = linear-check\nny = 64\nnonlinear = false\nfamily = symmetric-wake\n x0 = 40 \n")
            .unwrap();
        assert_eq!(c.mode, Mode::LinearCheck);
        assert_eq!((c.params.ny, c.params.nonlinear, c.params.x0), (64, false, 40.0));
        assert_eq!(c.family, Family::SymmetricWake);
    }

    #[test]
    fn errors_carry_the_line_number() {
        let cases = [
            ("ny = 64\nbogus = 1\n", 2),
            ("\n\nny = sixty\n", 3),
            ("ny = 64\nny = 32\n", 2),
            ("just text\n", 1),
            ("mode = fly\n", 1),
            ("nx =\n", 1),
        ];
        for (text, line) in cases {
            match RunConfig::parse_str(text) {
                Err(CliError::Config { line: Some(l), .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn restriction_violations_are_config_errors() {
        let e = RunConfig::load("phi = 0.9\n").unwrap_err();
        assert_eq!(e.class(), "config");
    }

    #[test]
    fn canonical_text_round_trips() {
        let mut c = RunConfig::default();
        c.params.phi = 1.0 / 17.0;
        c.params.eta = 0.1 + 0.2;
        c.seed = 99;
        c.trace = Some("t.csv".into());
        let back = RunConfig::parse_str(&c.to_text()).unwrap();
        assert_eq!(back, c);
    }
}

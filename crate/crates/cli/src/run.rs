//! Run orchestration: one pipeline per mode, every artifact written to the
//! output directory.

use std::fs;
use std::path::Path;

use wake_core::kernels::{apply_kernel, multiplier_l, KernelId, Multiplier};
use wake_core::solver::{boundary_fit, make_boundary, picard_solve};
use wake_core::verify::{verify_all, VerifyConfig};
use wake_core::{BoundaryData, FlowState, Grid, Params, Slice};

use crate::config::{fmt_f64, Mode, RunConfig, Sweep};
use crate::error::{CliError, Result};
use crate::report::{coeffs_report, iterations_csv, norms_csv, write_text, KeyValues};
use crate::resample::resample_trace;
use crate::snapshot::{read_boundary, read_state, write_boundary, write_state};

/// Tolerance of the linear-regime comparison against direct kernel
/// application.
pub const LINEAR_CHECK_TOL: f64 = 1e-10;

/// What a run reports on standard output.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub summary: Vec<String>,
}

impl Outcome {
    fn line(&mut self, s: impl Into<String>) {
        self.summary.push(s.into());
    }
}

/// Execute the configured pipeline.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let out = &cfg.out;
    fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    write_text(&out.join("run.cfg"), &cfg.to_text())?;
    let mut o = Outcome::default();
    o.line(format!("mode {}", cfg.mode));
    match cfg.mode {
        Mode::Solve => solve(cfg, &mut o)?,
        Mode::LinearCheck => linear_check(cfg, &mut o)?,
        Mode::BoundaryFit => fit(cfg, &mut o)?,
        Mode::Extract => extract(cfg, &mut o)?,
        Mode::VerifyKernels => verify(cfg, &mut o)?,
    }
    o.line(format!("artifacts in {}", out.display()));
    Ok(o)
}

fn write_flow(dir: &Path, params: &Params, grid: &Grid, b: &BoundaryData, st: &FlowState) -> Result<()> {
    write_boundary(dir, params, grid, b)?;
    write_state(dir, params, grid, st)?;
    write_text(&dir.join("norms.csv"), &norms_csv(&st.norms(params, grid)?))?;
    write_text(&dir.join("iterations.csv"), &iterations_csv(&st.meta))
}

fn solve(cfg: &RunConfig, o: &mut Outcome) -> Result<()> {
    let p = &cfg.params;
    let grid = Grid::new(p)?;
    let b = make_boundary(p, &grid, cfg.family, cfg.amplitude, cfg.seed)?;
    let st = picard_solve(p, &grid, &b)?;
    write_flow(&cfg.out, p, &grid, &b, &st)?;
    let (rep, text) = coeffs_report(p, &grid, &b, &st)?;
    write_text(&cfg.out.join("coeffs.txt"), &text)?;
    o.line(format!("sweeps {}", st.meta.sweeps));
    o.line(format!("a1 = {}", fmt_f64(rep.coeffs.a1)));
    o.line(format!("a4 = {} (pieces sum {})", fmt_f64(rep.coeffs.a4), fmt_f64(rep.a4_pieces.sum())));
    Ok(())
}

/// Largest relative difference between the linear-regime solution and the
/// direct kernel evaluation u = K₁L_u w + K₀ν, v = K₁L_v w + K₀μ, ω = K₁w
/// at separation x − x₀.
pub fn linear_oracle_defect(params: &Params, grid: &Grid, b: &BoundaryData, st: &FlowState) -> Result<f64> {
    let (s, tol) = (params.strouhal, params.mean_tol);
    let lu = multiplier_l(grid, Multiplier::Lu, s, tol, &b.w)?;
    let lv = multiplier_l(grid, Multiplier::Lv, s, tol, &b.w)?;
    let mut worst: f64 = 0.0;
    for (i, &x) in grid.stations().iter().enumerate() {
        let d = x - params.x0;
        let k = |id: KernelId, f: &Slice| apply_kernel(grid, id, d, s, f);
        let w = k(KernelId::K1, &b.w)?;
        let u = &k(KernelId::K1, &lu)? + &k(KernelId::K0, &b.nu)?;
        let v = &k(KernelId::K1, &lv)? + &k(KernelId::K0, &b.mu)?;
        for (got, want) in [(&st.u.slices[i], &u), (&st.v.slices[i], &v), (&st.w.slices[i], &w)] {
            let scale = want.max_abs();
            let diff = (got - want).max_abs();
            worst = worst.max(if scale > 0.0 { diff / scale } else { diff });
        }
    }
    Ok(worst)
}

fn linear_check(cfg: &RunConfig, o: &mut Outcome) -> Result<()> {
    let p = Params { nonlinear: false, ..cfg.params.clone() };
    let grid = Grid::new(&p)?;
    let b = make_boundary(&p, &grid, cfg.family, cfg.amplitude, cfg.seed)?;
    let st = picard_solve(&p, &grid, &b)?;
    write_flow(&cfg.out, &p, &grid, &b, &st)?;
    let defect = linear_oracle_defect(&p, &grid, &b, &st)?;
    let pass = defect < LINEAR_CHECK_TOL;
    let text = KeyValues::new("# wake-linear-check v1")
        .text("sweeps", st.meta.sweeps)
        .num("max_relative_defect", defect)
        .num("tolerance", LINEAR_CHECK_TOL)
        .text("pass", pass)
        .finish();
    write_text(&cfg.out.join("linear_check.txt"), &text)?;
    o.line(format!("linear oracle defect {} ({})", fmt_f64(defect), if pass { "PASS" } else { "FAIL" }));
    Ok(())
}

fn fit(cfg: &RunConfig, o: &mut Outcome) -> Result<()> {
    let p = &cfg.params;
    let grid = Grid::new(p)?;
    let mut kv = KeyValues::new("# wake-boundary-fit v1");
    // Traces from a file, or from a forward run whose boundary data are
    // then known exactly.
    let (ub, vb, wb, truth) = match &cfg.trace {
        Some(path) => {
            let t = resample_trace(&grid, p.nt, path)?;
            kv.text("trace", path.display()).num("trace.interpolation_residual", t.residual);
            (t.u, t.v, t.w, None)
        }
        None => {
            let b = make_boundary(p, &grid, cfg.family, cfg.amplitude, cfg.seed)?;
            let st = picard_solve(p, &grid, &b)?;
            kv.text("trace", "forward-run");
            (st.u.slices[0].clone(), st.v.slices[0].clone(), st.w.slices[0].clone(), Some(b))
        }
    };
    let r = boundary_fit(p, &grid, &ub, &vb, &wb)?;
    write_boundary(&cfg.out, p, &grid, &r.boundary)?;
    kv.text("iterations", r.iterations).num("v_relation_residual", r.residual).num("mean_defect", r.mean_defect);
    if let Some(b) = truth {
        let scale = b.w.max_abs().max(b.nu.max_abs());
        let err = (&r.boundary.w - &b.w).max_abs().max((&r.boundary.nu - &b.nu).max_abs());
        let rel = if scale > 0.0 { err / scale } else { err };
        kv.num("recovery_error", rel);
        o.line(format!("recovery error {}", fmt_f64(rel)));
    }
    write_text(&cfg.out.join("fit.txt"), &kv.finish())?;
    o.line(format!("fit iterations {}, v-relation residual {}", r.iterations, fmt_f64(r.residual)));
    Ok(())
}

fn extract(cfg: &RunConfig, o: &mut Outcome) -> Result<()> {
    let p = &cfg.params;
    let grid = Grid::new(p)?;
    let input = cfg.input.as_ref().expect("validated");
    let b = read_boundary(input, p)?;
    let st = read_state(input, p, &grid)?;
    let (rep, text) = coeffs_report(p, &grid, &b, &st)?;
    write_text(&cfg.out.join("coeffs.txt"), &text)?;
    o.line(format!("a1 = {}", fmt_f64(rep.coeffs.a1)));
    Ok(())
}

fn verify(cfg: &RunConfig, o: &mut Outcome) -> Result<()> {
    let s = cfg.params.strouhal;
    let vc = match cfg.sweep {
        Sweep::Full => VerifyConfig::new(s),
        Sweep::Coarse => VerifyConfig::coarse(s),
    };
    let rep = verify_all(&vc, cfg.seed)?;
    write_text(&cfg.out.join("verify.tsv"), &rep.table())?;
    let total = rep.bounds.len() + rep.exact.len();
    let failures = rep.failures();
    o.line(format!("{} of {total} checks pass", total - failures.len()));
    for f in failures {
        o.line(format!("FAIL {f}"));
    }
    Ok(())
}

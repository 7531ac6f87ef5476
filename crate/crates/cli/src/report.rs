//! Flat text reports: norms per station, iteration history, coefficients.

use std::fmt::Write as _;
use std::path::Path;

use wake_core::asymptotics::{a1_diagnostic, decay_fit, extract_coeffs, CoeffReport};
use wake_core::norms::NormReport;
use wake_core::solver::IterationMeta;
use wake_core::{BoundaryData, FlowState, Grid, Params};

use crate::config::fmt_f64;
use crate::error::Result;
use crate::snapshot::write_file;

pub const COEFFS_HEADER: &str = "# wake-coeffs v1";
/// Allowed excess of a fitted decay slope over its predicted exponent.
pub const DECAY_MARGIN: f64 = 0.15;

/// Names of the ten composite-norm components, in order.
pub const NORM_COLUMNS: [&str; 10] = [
    "u_sup", "u_lq", "du_lr", "v_sup", "v_lp", "dv_lr", "omega_l2", "omega_weighted_l2", "domega_sup", "domega_l1",
];

pub fn norms_csv(norms: &[NormReport]) -> String {
    let mut s = format!("station,x,{},total\n", NORM_COLUMNS.join(","));
    for (i, n) in norms.iter().enumerate() {
        let _ = write!(s, "{i},{}", fmt_f64(n.x));
        for c in n.components {
            let _ = write!(s, ",{}", fmt_f64(c));
        }
        let _ = writeln!(s, ",{}", fmt_f64(n.total()));
    }
    s
}

pub fn iterations_csv(meta: &IterationMeta) -> String {
    let mut s = String::from("sweep,increment,ratio\n");
    for (i, inc) in meta.increments.iter().enumerate() {
        let ratio = if i == 0 { String::new() } else { meta.ratios.get(i - 1).map(|r| fmt_f64(*r)).unwrap_or_default() };
        let _ = writeln!(s, "{},{},{ratio}", i + 1, fmt_f64(*inc));
    }
    s
}

/// Flat `key = value` report builder.
#[derive(Default)]
pub struct KeyValues(String);

impl KeyValues {
    pub fn new(header: &str) -> Self {
        KeyValues(format!("{header}\n"))
    }

    pub fn num(&mut self, key: &str, v: f64) -> &mut Self {
        let _ = writeln!(self.0, "{key} = {}", fmt_f64(v));
        self
    }

    pub fn text(&mut self, key: &str, v: impl std::fmt::Display) -> &mut Self {
        let _ = writeln!(self.0, "{key} = {v}");
        self
    }

    pub fn finish(&self) -> String {
        self.0.clone()
    }
}

/// Coefficients a₁…a₆ (a₄ both as the explicit pieces and as the fit),
/// fitted decay slopes and the ã₁ variation.  A failing decay fit or ã₁
/// diagnostic is recorded in the report instead of aborting it.
pub fn coeffs_report(params: &Params, grid: &Grid, boundary: &BoundaryData, state: &FlowState) -> Result<(CoeffReport, String)> {
    let rep = extract_coeffs(params, grid, boundary, state)?;
    let c = &rep.coeffs;
    let mut kv = KeyValues::new(COEFFS_HEADER);
    kv.num("a1", c.a1);
    for (name, v) in [("a2", &c.a2), ("a3", &c.a3)] {
        for (i, z) in v.iter().enumerate() {
            let n = i as i64 - c.nt() as i64;
            kv.num(&format!("{name}[{n}].re"), z.re).num(&format!("{name}[{n}].im"), z.im);
        }
    }
    kv.num("a4", c.a4)
        .num("a4.fit", rep.a4_fit)
        .num("a4.fit_spread", rep.a4_fit_spread)
        .num("a4.pieces.linear", rep.a4_pieces.linear)
        .num("a4.pieces.boundary", rep.a4_pieces.boundary)
        .num("a4.pieces.q_moment", rep.a4_pieces.q_moment)
        .num("a4.pieces.log", rep.a4_pieces.log)
        .num("a4.pieces.sum", rep.a4_pieces.sum())
        .num("a5", c.a5)
        .num("a6", c.a6)
        .num("q_integral.total", rep.q_integral.total)
        .num("q_integral.boundary_form", rep.q_integral.boundary_form)
        .num("q_integral.tail_exponent", rep.q_integral.alpha)
        .num("mass_relation", rep.mass_relation)
        .num("force.drag", rep.force.0)
        .num("force.lift", rep.force.1)
        .num("time_variation.a2", rep.time_variation.0)
        .num("time_variation.a3", rep.time_variation.1);
    match a1_diagnostic(params, grid, state) {
        Ok(d) => {
            kv.num("a1_tilde.mean", d.mean)
                .num("a1_tilde.relative_variation", d.relative_variation)
                .num("a1_tilde.cross_form_defect", d.cross_form_defect)
                .num("a1_tilde.plus_a1", d.sum_with(c.a1));
        }
        Err(e) => {
            kv.text("a1_tilde.error", e);
        }
    }
    match decay_fit(params, grid, state, c) {
        Ok(d) => {
            kv.num("decay.x_first", d.x.first().copied().unwrap_or(f64::NAN))
                .num("decay.x_last", d.x.last().copied().unwrap_or(f64::NAN));
            for f in &d.fits {
                let k = format!("decay.{}", f.residual.name());
                kv.num(&format!("{k}.slope"), f.slope)
                    .num(&format!("{k}.predicted"), f.predicted)
                    .text(&format!("{k}.degenerate"), f.degenerate)
                    .text(&format!("{k}.pass"), f.passes(DECAY_MARGIN));
            }
        }
        Err(e) => {
            kv.text("decay.error", e);
        }
    }
    Ok((rep, kv.finish()))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    write_file(path, |w| w.write_all(text.as_bytes()))
}

//! Field snapshots as delimited text.
//!
//! A spectral snapshot holds several fields of one slice (all temporal
//! modes at one x-station):
//!
//! ```text
//! # wake-snapshot v1
//! # station = 0
//! # x = 2e1
//! # nt = 2
//! # ny = 512
//! # half_width = 4e2
//! n,k_index,u_re,u_im,v_re,v_im,omega_re,omega_im
//! -2,0,...
//! ```
//!
//! with one row per temporal mode n and FFT-ordered wavenumber index.  The
//! y-space companion (`*_y.csv`) lists the same fields on the grid nodes,
//! `n,j,y,u_re,...`.  Numbers are written in the shortest form that parses
//! back to identical bits, so re-reading a snapshot is exact.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use wake_core::{BoundaryData, FieldLabel, FlowState, Grid, Params, Slice, SpectralField};

use crate::config::fmt_f64;
use crate::error::{CliError, Result};

pub const SNAPSHOT_HEADER: &str = "# wake-snapshot v1";
pub const SNAPSHOT_DIR: &str = "snapshots";
pub const BOUNDARY_FILE: &str = "boundary.csv";

/// Create `path` and write it through a buffered writer.
pub fn write_file(path: &Path, body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
    let io = |e| CliError::io(path, e);
    let f = fs::File::create(path).map_err(io)?;
    let mut w = BufWriter::new(f);
    body(&mut w).map_err(io)?;
    w.flush().map_err(io)
}

fn write_meta(w: &mut dyn Write, meta: &[(&str, String)]) -> std::io::Result<()> {
    writeln!(w, "{SNAPSHOT_HEADER}")?;
    for (k, v) in meta {
        writeln!(w, "# {k} = {v}")?;
    }
    Ok(())
}

fn columns(names: &[&str]) -> String {
    names.iter().map(|n| format!("{n}_re,{n}_im")).collect::<Vec<_>>().join(",")
}

/// Spectral snapshot of the named slices (all of equal shape).
pub fn write_spectral(path: &Path, meta: &[(&str, String)], fields: &[(&str, &Slice)]) -> Result<()> {
    let names: Vec<&str> = fields.iter().map(|f| f.0).collect();
    let first = fields[0].1;
    write_file(path, |w| {
        write_meta(w, meta)?;
        writeln!(w, "n,k_index,{}", columns(&names))?;
        for n in first.mode_numbers() {
            for m in 0..first.ny() {
                write!(w, "{n},{m}")?;
                for (_, s) in fields {
                    let c = s.mode(n)[m];
                    write!(w, ",{},{}", fmt_f64(c.re), fmt_f64(c.im))?;
                }
                writeln!(w)?;
            }
        }
        Ok(())
    })
}

/// y-space companion of [`write_spectral`].
pub fn write_physical(path: &Path, grid: &Grid, meta: &[(&str, String)], fields: &[(&str, &Slice)]) -> Result<()> {
    let names: Vec<&str> = fields.iter().map(|f| f.0).collect();
    let values: Vec<Vec<Vec<C64>>> = fields.iter().map(|(_, s)| s.to_physical(grid)).collect::<wake_core::Result<_>>()?;
    let modes: Vec<i64> = fields[0].1.mode_numbers().collect();
    let y = grid.y();
    write_file(path, |w| {
        write_meta(w, meta)?;
        writeln!(w, "n,j,y,{}", columns(&names))?;
        for (r, &n) in modes.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                write!(w, "{n},{j},{}", fmt_f64(yj))?;
                for v in &values {
                    let c = v[r][j];
                    write!(w, ",{},{}", fmt_f64(c.re), fmt_f64(c.im))?;
                }
                writeln!(w)?;
            }
        }
        Ok(())
    })
}

/// Contents of a spectral snapshot.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub meta: Vec<(String, String)>,
    pub names: Vec<String>,
    pub slices: Vec<Slice>,
}

impl Snapshot {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn field(&self, name: &str) -> Option<&Slice> {
        self.names.iter().position(|n| n == name).map(|i| &self.slices[i])
    }
}

pub fn read_spectral(path: &Path) -> Result<Snapshot> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let bad = |line: usize, msg: String| CliError::format(path, line, msg);
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, SNAPSHOT_HEADER)) => {}
        _ => return Err(bad(1, format!("missing '{SNAPSHOT_HEADER}' header"))),
    }
    let mut meta = Vec::new();
    let mut header = None;
    for (ln, l) in lines.by_ref() {
        if let Some(rest) = l.strip_prefix('#') {
            let (k, v) = rest.split_once('=').ok_or_else(|| bad(ln, "malformed metadata line".into()))?;
            meta.push((k.trim().to_string(), v.trim().to_string()));
        } else {
            header = Some((ln, l));
            break;
        }
    }
    let (hl, header) = header.ok_or_else(|| bad(1, "missing column header".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.len() < 4 || cols[0] != "n" || cols[1] != "k_index" || (cols.len() - 2) % 2 != 0 {
        return Err(bad(hl, format!("unexpected columns '{header}'")));
    }
    let mut names = Vec::new();
    for pair in cols[2..].chunks(2) {
        let name = pair[0].strip_suffix("_re");
        if name.is_none() || pair[1].strip_suffix("_im") != name {
            return Err(bad(hl, format!("unexpected columns '{header}'")));
        }
        names.push(name.unwrap_or_default().to_string());
    }
    let num = |key: &str| -> Result<usize> {
        meta.iter()
            .find(|(k, _)| k == key)
            .and_then(|(_, v)| v.parse().ok())
            .ok_or_else(|| bad(1, format!("metadata '{key}' missing or invalid")))
    };
    let (nt, ny) = (num("nt")?, num("ny")?);
    let rows = (2 * nt + 1) * ny;
    let mut data = vec![vec![C64::new(0.0, 0.0); rows]; names.len()];
    let mut count = 0;
    for (ln, l) in lines {
        if l.is_empty() {
            continue;
        }
        let f: Vec<&str> = l.split(',').collect();
        if f.len() != cols.len() {
            return Err(bad(ln, format!("expected {} columns, found {}", cols.len(), f.len())));
        }
        let n: i64 = f[0].parse().map_err(|_| bad(ln, format!("bad mode '{}'", f[0])))?;
        let m: usize = f[1].parse().map_err(|_| bad(ln, format!("bad index '{}'", f[1])))?;
        if n.unsigned_abs() as usize > nt || m >= ny {
            return Err(bad(ln, format!("mode {n} or index {m} out of range")));
        }
        let at = (n + nt as i64) as usize * ny + m;
        for (i, d) in data.iter_mut().enumerate() {
            let p = |s: &str| s.parse::<f64>().map_err(|_| bad(ln, format!("bad number '{s}'")));
            d[at] = C64::new(p(f[2 + 2 * i])?, p(f[3 + 2 * i])?);
        }
        count += 1;
    }
    if count != rows {
        return Err(bad(hl, format!("expected {rows} data rows, found {count}")));
    }
    let slices = data
        .into_iter()
        .map(|d| Slice::from_modes(d.chunks(ny).map(<[C64]>::to_vec).collect()))
        .collect::<wake_core::Result<_>>()?;
    Ok(Snapshot { meta, names, slices })
}

fn grid_meta(params: &Params, grid: &Grid) -> Vec<(&'static str, String)> {
    vec![
        ("nt", params.nt.to_string()),
        ("ny", grid.ny().to_string()),
        ("half_width", fmt_f64(params.half_width)),
    ]
}

pub fn station_path(dir: &Path, i: usize, physical: bool) -> PathBuf {
    dir.join(SNAPSHOT_DIR).join(format!("station_{i:04}{}.csv", if physical { "_y" } else { "" }))
}

/// Boundary data (w, ν, μ) at x₀, spectral and y-space.
pub fn write_boundary(dir: &Path, params: &Params, grid: &Grid, b: &BoundaryData) -> Result<()> {
    let mut meta = vec![("x", fmt_f64(params.x0))];
    meta.extend(grid_meta(params, grid));
    let fields = [("w", &b.w), ("nu", &b.nu), ("mu", &b.mu)];
    write_spectral(&dir.join(BOUNDARY_FILE), &meta, &fields)?;
    write_physical(&dir.join("boundary_y.csv"), grid, &meta, &fields)
}

/// One spectral and one y-space file per station.
pub fn write_state(dir: &Path, params: &Params, grid: &Grid, state: &FlowState) -> Result<()> {
    let sub = dir.join(SNAPSHOT_DIR);
    fs::create_dir_all(&sub).map_err(|e| CliError::io(&sub, e))?;
    for (i, &x) in grid.stations().iter().enumerate() {
        let mut meta = vec![("station", i.to_string()), ("x", fmt_f64(x))];
        meta.extend(grid_meta(params, grid));
        let fields = [("u", &state.u.slices[i]), ("v", &state.v.slices[i]), ("omega", &state.w.slices[i])];
        write_spectral(&station_path(dir, i, false), &meta, &fields)?;
        write_physical(&station_path(dir, i, true), grid, &meta, &fields)?;
    }
    Ok(())
}

fn check_shape(path: &Path, snap: &Snapshot, params: &Params, x: f64, names: &[&str]) -> Result<()> {
    let want = [
        ("nt", params.nt.to_string()),
        ("ny", params.ny.to_string()),
        ("half_width", fmt_f64(params.half_width)),
        ("x", fmt_f64(x)),
    ];
    for (k, v) in want {
        if snap.meta(k) != Some(v.as_str()) {
            return Err(CliError::Precondition(format!(
                "{}: {k} = {} does not match the configuration ({v})",
                path.display(),
                snap.meta(k).unwrap_or("<missing>")
            )));
        }
    }
    for n in names {
        if snap.field(n).is_none() {
            return Err(CliError::format(path, 1, format!("field '{n}' missing")));
        }
    }
    Ok(())
}

pub fn read_boundary(dir: &Path, params: &Params) -> Result<BoundaryData> {
    let path = dir.join(BOUNDARY_FILE);
    let s = read_spectral(&path)?;
    check_shape(&path, &s, params, params.x0, &["w", "nu", "mu"])?;
    let f = |n: &str| s.field(n).cloned().expect("checked above");
    Ok(BoundaryData { w: f("w"), nu: f("nu"), mu: f("mu") })
}

/// Read every station written by [`write_state`] for this configuration.
pub fn read_state(dir: &Path, params: &Params, grid: &Grid) -> Result<FlowState> {
    let mut st = FlowState::zeros(0, params.nt, params.ny);
    let (mut u, mut v, mut w) = (Vec::new(), Vec::new(), Vec::new());
    for (i, &x) in grid.stations().iter().enumerate() {
        let path = station_path(dir, i, false);
        let s = read_spectral(&path)?;
        check_shape(&path, &s, params, x, &["u", "v", "omega"])?;
        u.push(s.field("u").cloned().expect("checked"));
        v.push(s.field("v").cloned().expect("checked"));
        w.push(s.field("omega").cloned().expect("checked"));
    }
    st.u = SpectralField { label: FieldLabel::U, slices: u };
    st.v = SpectralField { label: FieldLabel::V, slices: v };
    st.w = SpectralField { label: FieldLabel::Omega, slices: w };
    Ok(st)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let a = Slice::from_modes(vec![
            (0..8).map(|m| C64::new(0.1 * m as f64, -1.0 / 3.0)).collect(),
            (0..8).map(|m| C64::new(std::f64::consts::PI.powi(m), 1e-300)).collect(),
            (0..8).map(|m| C64::new(-(m as f64), f64::MIN_POSITIVE)).collect(),
        ])
        .unwrap();
        let b = a.scale(1.0 / 7.0);
        let path = dir.path().join("s.csv");
        write_spectral(&path, &[("nt", "1".into()), ("ny", "8".into())], &[("u", &a), ("v", &b)]).unwrap();
        let s = read_spectral(&path).unwrap();
        assert_eq!(s.names, ["u", "v"]);
        assert_eq!(s.slices[0], a);
        assert_eq!(s.slices[1], b);
        assert_eq!(s.meta("nt"), Some("1"));
    }

    #[test]
    fn truncated_snapshot_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        fs::write(&path, format!("{SNAPSHOT_HEADER}\n# nt = 0\n# ny = 8\nn,k_index,u_re,u_im\n0,0,1e0,0e0\n")).unwrap();
        assert!(matches!(read_spectral(&path), Err(CliError::Format { .. })));
    }
}

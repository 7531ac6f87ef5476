use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn wake(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wake")).args(args).output().expect("binary runs")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn write_cfg(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.conf");
    fs::write(&p, text).unwrap();
    p
}

fn kv(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("{key} missing"))
        .to_string()
}

/// A small nonlinear run that converges in well under a second.
const SMALL: &str = "ny = 64\nhalf_width = 200\nnt = 1\nnx = 24\nx_max = 400\n";

#[test]
fn zero_run_matches_golden_files() {
    let out = tempfile::tempdir().unwrap();
    let cfg = golden_dir().join("zero-run.cfg");
    let r = wake(&["--config", cfg.to_str().unwrap(), "--out", out.path().to_str().unwrap(), "--quiet"]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert!(r.stdout.is_empty());
    let golden = golden_dir().join("zero-run");
    let mut files = vec![];
    for sub in ["", "snapshots"] {
        for e in fs::read_dir(golden.join(sub)).unwrap() {
            let p = e.unwrap().path();
            if p.is_file() {
                files.push(p.strip_prefix(&golden).unwrap().to_path_buf());
            }
        }
    }
    assert_eq!(files.len(), 9);
    for f in files {
        let want = fs::read(golden.join(&f)).unwrap();
        let got = fs::read(out.path().join(&f)).unwrap_or_else(|_| panic!("{} not written", f.display()));
        assert!(got == want, "{} differs from the golden file", f.display());
    }
    let check = fs::read_to_string(out.path().join("linear_check.txt")).unwrap();
    assert_eq!(kv(&check, "pass"), "true");
}

#[test]
fn extract_on_persisted_snapshots_reproduces_coefficients_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), SMALL);
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    for out in [&a, &b] {
        let r = wake(&["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--seed", "2"]);
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    }
    // Same seed, same bytes.
    for f in ["coeffs.txt", "norms.csv", "boundary.csv", "snapshots/station_0023.csv", "snapshots/station_0007_y.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let cfg = write_cfg(dir.path(), &format!("{SMALL}mode = extract\ninput = {}\n", a.display()));
    let r = wake(&["--config", cfg.to_str().unwrap(), "--out", c.to_str().unwrap()]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let solved = fs::read_to_string(a.join("coeffs.txt")).unwrap();
    assert_eq!(solved, fs::read_to_string(c.join("coeffs.txt")).unwrap());
    assert!(solved.starts_with("# wake-coeffs v1\n"));
    for key in ["a1", "a4", "a4.fit", "a4.pieces.sum", "a5", "a6", "a1_tilde.relative_variation", "decay.omega_sup.slope"] {
        assert!(kv(&solved, key).parse::<f64>().unwrap().is_finite(), "{key}");
    }
    // A different seed gives different boundary data.
    let r = wake(&["--config", cfg.to_str().unwrap(), "--out", b.to_str().unwrap(), "--mode", "solve", "--seed", "3"]);
    assert!(r.status.success());
    assert_ne!(fs::read(a.join("boundary.csv")).unwrap(), fs::read(b.join("boundary.csv")).unwrap());
}

#[test]
fn malformed_key_is_a_config_error_with_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "# comment\nny = 64\nreynolds = 100\n");
    let r = wake(&["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
    let err = String::from_utf8_lossy(&r.stderr);
    assert!(err.starts_with("error[config]: line 3:"), "{err}");
    assert!(err.contains("reynolds"), "{err}");
}

#[test]
fn inadmissible_exponents_are_rejected_at_load() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "phi = 0.9\n");
    let r = wake(&["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("restriction"));
}

#[test]
fn mismatched_snapshots_are_a_precondition_error() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let cfg = golden_dir().join("zero-run.cfg");
    assert!(wake(&["--config", cfg.to_str().unwrap(), "--out", a.to_str().unwrap()]).status.success());
    let text = fs::read_to_string(&cfg).unwrap().replace("x_max = 40", "x_max = 50").replace("mode = linear-check\n", "");
    let cfg = write_cfg(dir.path(), &format!("{text}mode = extract\ninput = {}\n", a.display()));
    let r = wake(&["--config", cfg.to_str().unwrap(), "--out", dir.path().join("b").to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(3), "{}", String::from_utf8_lossy(&r.stderr));
    assert!(String::from_utf8_lossy(&r.stderr).starts_with("error[precondition]"));
}

#[test]
fn missing_input_directory_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), &format!("{SMALL}mode = extract\ninput = {}\n", dir.path().join("nope").display()));
    let r = wake(&["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(5));
}

#[test]
fn non_contractive_data_exit_with_the_convergence_class() {
    // 100 times the reference amplitude.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), &format!("{SMALL}amplitude = 1\n"));
    let r = wake(&["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(4), "{}", String::from_utf8_lossy(&r.stderr));
}

#[test]
fn boundary_fit_recovers_forward_run_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), &SMALL.replace("ny = 64", "ny = 128"));
    let r = wake(&["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "--mode", "boundary-fit"]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let fit = fs::read_to_string(dir.path().join("fit.txt")).unwrap();
    assert!(kv(&fit, "recovery_error").parse::<f64>().unwrap() < 1e-6, "{fit}");
    assert!(kv(&fit, "v_relation_residual").parse::<f64>().unwrap() < 1e-6, "{fit}");
}

#[test]
fn boundary_fit_accepts_a_trace_file() {
    // Zero vorticity trace with a Gaussian streamwise trace sampled at twice
    // the grid density.
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let mut s = String::from("n,y,u_re,u_im,v_re,v_im,omega_re,omega_im\n");
    for i in 0..=512 {
        let y = -160.0 + i as f64 * 0.625;
        s.push_str(&format!("0,{y},{},0,0,0,0,0\n", 1e-3 * (-y * y / 400.0).exp()));
    }
    fs::write(&trace, s).unwrap();
    let cfg = write_cfg(
        dir.path(),
        &format!("{}mode = boundary-fit\ntrace = {}\n", SMALL.replace("ny = 64", "ny = 128"), trace.display()),
    );
    let r = wake(&["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let fit = fs::read_to_string(dir.path().join("fit.txt")).unwrap();
    assert!(kv(&fit, "trace.interpolation_residual").parse::<f64>().unwrap() < 1e-10, "{fit}");
    assert!(dir.path().join("boundary.csv").exists());
}

#[test]
fn verify_kernels_reports_every_suite_entry() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "mode = verify-kernels\nverify_sweep = coarse\n");
    let r = wake(&["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let table = fs::read_to_string(dir.path().join("verify.tsv")).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("lemma\tquantity\tenvelope\tfitted_C\tmargin\tpass"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() > 150, "{}", rows.len());
    assert!(rows.iter().all(|r| r.ends_with("\tPASS") || r.ends_with("\tFAIL")));
    for lemma in ["kernelun", "kerneldeux", "kerneldeuxx", "withkr", "withki", "sourcelikeesti", "univ", "onLALB"] {
        assert!(rows.iter().any(|r| r.starts_with(&format!("{lemma}\t"))), "{lemma}");
    }
    assert!(rows.iter().any(|r| r.contains("||K0(x)||_1") && r.ends_with("PASS")), "unit mass row");
}

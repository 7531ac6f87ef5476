use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use wake_cli::{run, CliError, Mode, RunConfig};

/// Time-periodic Navier–Stokes wake solver.
#[derive(Debug, Parser)]
#[command(name = "wake", version)]
struct Args {
    /// `key = value` configuration file (reference parameters when absent).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Pipeline to run; overrides the file.
    #[arg(long, value_parser = |s: &str| s.parse::<Mode>())]
    mode: Option<Mode>,
    /// Output directory; overrides the file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Random seed for synthetic boundary data; overrides the file.
    #[arg(long)]
    seed: Option<u64>,
    /// Suppress the summary on standard output.
    #[arg(long)]
    quiet: bool,
}

fn load(args: &Args) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            RunConfig::parse_str(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(m) = args.mode {
        cfg.mode = m;
    }
    if let Some(o) = &args.out {
        cfg.out = o.clone();
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match load(&args).and_then(|cfg| run(&cfg)) {
        Ok(outcome) => {
            if !args.quiet {
                for l in outcome.summary {
                    println!("{l}");
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.class());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

//! Driver errors and their exit statuses.

use std::path::{Path, PathBuf};

use thiserror::Error;
use wake_core::{ErrorClass, WakeError};

#[derive(Debug, Error)]
pub enum CliError {
    /// A configuration problem, with the offending line when known.
    #[error("{}{msg}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Config { line: Option<usize>, msg: String },
    /// An input that is well-formed but unusable (e.g. a trace file that
    /// does not span the grid).
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Core(#[from] WakeError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    /// A persisted artifact that cannot be read back.
    #[error("{}:{line}: {msg}", path.display())]
    Format { path: PathBuf, line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn config(line: Option<usize>, msg: impl Into<String>) -> Self {
        CliError::Config { line, msg: msg.into() }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn format(path: &Path, line: usize, msg: impl Into<String>) -> Self {
        CliError::Format { path: path.to_path_buf(), line, msg: msg.into() }
    }

    /// Machine-readable class: config, precondition, convergence or io.
    pub fn class(&self) -> &'static str {
        match self {
            CliError::Config { .. } => "config",
            CliError::Precondition(_) => "precondition",
            CliError::Core(e) => match e.class() {
                ErrorClass::Config => "config",
                ErrorClass::Precondition => "precondition",
                ErrorClass::Convergence => "convergence",
            },
            CliError::Io { .. } | CliError::Format { .. } => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.class() {
            "config" => 2,
            "precondition" => 3,
            "convergence" => 4,
            _ => 5,
        }
    }
}

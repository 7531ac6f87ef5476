//! Driver for the wake solver: `key = value` configuration, run
//! orchestration and deterministic text artifacts.

pub mod config;
pub mod error;
pub mod report;
pub mod resample;
pub mod run;
pub mod snapshot;

pub use config::{Mode, RunConfig, Sweep};
pub use error::{CliError, Result};
pub use run::{run, Outcome};

//! Benchmark harness for the `acfgm` solver library: experiment
//! configuration, a (optionally parallel) runner producing convergence
//! traces, trace export, and summary tables.

pub mod config;
pub mod cputime;
pub mod export;
pub mod runner;
pub mod summary;
pub mod trace;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
}

impl HarnessError {
    /// Process exit code this error maps to.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 1,
            HarnessError::Data(_) => 2,
        }
    }
}

pub use config::{ExperimentConfig, RawConfig};
pub use runner::run_experiment;
pub use summary::{render_table, summarize, summary_csv};
pub use trace::{Trace, TraceMeta, TraceRecord, CSV_HEADER};

//! Command-line front end for `kplane-core`.
//!
//! The binary evaluates sharp constants, runs transforms on random planes,
//! executes registered checks from experiment files and searches the two
//! conjecture targets. All output is a deterministic function of the
//! arguments and the seed; `--threads` only changes wall time.
//!
//! Exit codes: 0 success, 1 a check failed, 2 user error, 3 a check was
//! inconclusive (and none failed), 4 an explorer found a violation.

pub mod app;
pub mod exec;
pub mod experiment;
pub mod report;

pub use exec::Pool;
pub use experiment::{ExperimentFile, Format, Overrides};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] kplane_core::Error),
    #[error("check {index} (`{id}`): {source}")]
    Check { index: usize, id: String, source: kplane_core::Error },
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("invalid experiment: {0}")]
    Schema(String),
    #[error("{0}")]
    Usage(String),
}

pub mod exit {
    pub const OK: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const INCONCLUSIVE: i32 = 3;
    pub const VIOLATION: i32 = 4;
}

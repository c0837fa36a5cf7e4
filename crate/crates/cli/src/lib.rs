//! Verification suites for `cone-count` and their CSV/JSON reports.

pub mod report;
pub mod suites;

pub use report::{emit, CheckRecord, Format, SeedBlock, Status, VerificationReport, CSV_HEADER};
pub use suites::{parse_grid, run_suite, Grid, RunConfig, Suite};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error(transparent)]
    Core(#[from] cone_count::Error),
}

impl CliError {
    /// 2 for usage errors, 3 for I/O and everything else that stops a run.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(cone_count::Error::InvalidArgument(_)) => 2,
            _ => 3,
        }
    }
}

use thiserror::Error;

/// Failures surfaced by the command-line driver.
#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] ussd_core::Error),
    #[error("invalid value for `{field}`: {reason}")]
    InvalidInput { field: &'static str, reason: String },
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("json output failed: {0}")]
    Json(#[from] serde_json::Error),
    #[error("thread pool setup failed: {0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
}

impl LabError {
    pub fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        LabError::InvalidInput { field, reason: reason.into() }
    }

    /// Process exit code: every error here is an input or setup problem.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

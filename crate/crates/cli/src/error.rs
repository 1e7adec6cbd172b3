//! Application errors mapped onto process exit codes.

use std::process::ExitCode;

pub type AppResult<T> = Result<T, AppError>;

/// Exit codes: 0 success, 2 config/usage, 3 runtime numerical, 4 I/O.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Usage(String),

    #[error("numerical failure: {0}")]
    Numerical(#[from] bosonbench_core::Error),

    #[error("I/O failure: {0}")]
    Io(String),
}

impl AppError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            AppError::Usage(_) => ExitCode::from(2),
            AppError::Numerical(_) => ExitCode::from(3),
            AppError::Io(_) => ExitCode::from(4),
        }
    }
}

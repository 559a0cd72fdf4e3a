//! Configuration ingestion, figure presets and output emission shared by
//! the command-line front end.

pub mod check;
pub mod config;
pub mod output;
pub mod presets;

use thiserror::Error;

/// Failures of a run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum AppError {
    /// Malformed or inconsistent configuration.
    #[error("config error: {0}")]
    Config(String),
    /// A numerical kernel rejected its inputs or failed to converge.
    #[error("numerical error: {0}")]
    Numerical(#[from] crate::Error),
    /// A cross-check between independent computations failed.
    #[error("check failed: {0}")]
    Check(String),
    /// Reading or writing a file failed.
    #[error("i/o error: {0}")]
    Io(String),
}

impl AppError {
    /// Exit status: 2 for configuration, 3 for numerical and check failures, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 2,
            AppError::Numerical(_) | AppError::Check(_) => 3,
            AppError::Io(_) => 4,
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e.to_string())
    }
}

pub type AppResult<T> = std::result::Result<T, AppError>;

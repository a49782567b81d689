use std::path::PathBuf;

use zerogap_core::Error as CoreError;

/// Every failure the driver reports, grouped by exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    ReadInput {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Config {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    /// 0 success, 1 user or config error or failed verification, 2 internal
    /// or computation failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_)
            | CliError::ReadInput { .. }
            | CliError::Config { .. }
            | CliError::Verification(_) => 1,
            CliError::Core(e) => match e {
                CoreError::Parse(_)
                | CoreError::InvalidConfig(_)
                | CoreError::InvalidArgument(_)
                | CoreError::InvalidSplit(_) => 1,
                _ => 2,
            },
            CliError::Write { .. } | CliError::Internal(_) => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

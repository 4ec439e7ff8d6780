use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

/// Failures of a CLI run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// One or more verification checks failed.
    #[error("{0}")]
    Verification(String),

    /// Bad command line or configuration.
    #[error("{0}")]
    Usage(String),

    /// A library invariant broke during a run.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Internal(_) | CliError::Io(_) => 3,
        }
    }
}

/// Library errors raised after the configuration has been validated are
/// broken invariants, not user mistakes.
impl From<liftcorr_core::Error> for CliError {
    fn from(e: liftcorr_core::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

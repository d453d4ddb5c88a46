use gmml_core::Error as CoreError;
use thiserror::Error;

/// Failures of a command, each tied to one process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Numeric(String),

    #[error("{0}")]
    Model(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Numeric(_) => 2,
            Self::Model(_) => 3,
        }
    }

    /// Errors raised while turning a config into a representation.
    pub fn model(e: CoreError) -> Self {
        match e {
            CoreError::Model(_) => Self::Model(e.to_string()),
            other => Self::Model(format!("invalid model: {other}")),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Domain(_) | CoreError::Degenerate(_) => Self::Usage(e.to_string()),
            CoreError::Model(_) => Self::Model(e.to_string()),
            _ => Self::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Usage(format!("i/o error: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

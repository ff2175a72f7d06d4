use std::path::PathBuf;

use thiserror::Error;

/// Process exit status for input or validation problems.
pub const EXIT_VALIDATION: i32 = 2;
/// Process exit status for numerical failures (non-convergence, singular information).
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("{path}, line {line}: {message}")]
    Line { path: PathBuf, line: u64, message: String },

    #[error("{0}")]
    Validation(String),

    #[error("{0}")]
    Numerical(String),

    #[error(transparent)]
    Model(#[from] exitchoice::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use exitchoice::Error as E;
        match self {
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Model(E::NotIdentified(_) | E::SingularDesign { .. } | E::InvalidVariance { .. }) => {
                EXIT_NUMERICAL
            }
            _ => EXIT_VALIDATION,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        CliError::Format { path: path.into(), message: message.into() }
    }

    pub(crate) fn line(path: impl Into<PathBuf>, line: u64, message: impl Into<String>) -> Self {
        CliError::Line { path: path.into(), line, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

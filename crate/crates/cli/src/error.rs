use spin_stirling::Error as CoreError;
use thiserror::Error;

/// Failure of one command, carrying the process exit code it maps to.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flag or config value. Exit 2.
    #[error("{0}")]
    Validation(String),
    /// Unreadable input or unwritable output. Exit 3.
    #[error("{0}")]
    Io(String),
    /// Input data could not be parsed or fitted. Exit 4.
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Io(_) => 3,
            CliError::Data(_) => 4,
        }
    }

    /// A core error raised while validating the parameters named by `flags`.
    pub fn invalid(flags: &str, err: CoreError) -> Self {
        match err {
            CoreError::Io { .. } => CliError::Io(err.to_string()),
            other => CliError::Validation(format!("{flags}: {other}")),
        }
    }

    /// A core error raised while reading or fitting a dataset.
    pub fn data(err: CoreError) -> Self {
        match err {
            CoreError::Io { .. } => CliError::Io(err.to_string()),
            CoreError::Csv(ref e) if e.is_io_error() => CliError::Io(err.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }

    /// A core error raised while writing output.
    pub fn output(err: CoreError) -> Self {
        match err {
            CoreError::Io { .. } | CoreError::Csv(_) | CoreError::Json(_) => {
                CliError::Io(err.to_string())
            }
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

use std::fmt::Display;

use thiserror::Error;

/// Failures mapped onto the process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or parameter values. Exit status 2.
    #[error("{0}")]
    Usage(String),
    /// Unreadable or malformed input files. Exit status 3.
    #[error("{0}")]
    Data(String),
    /// An exhaustive procedure refused an instance above its limits. Exit status 4.
    #[error("{0}")]
    Guard(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Guard(_) => 4,
        }
    }
}

impl From<msyds::Error> for CliError {
    fn from(e: msyds::Error) -> Self {
        match e {
            msyds::Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
            msyds::Error::GuardExceeded(_) => CliError::Guard(e.to_string()),
            msyds::Error::Parse { .. } | msyds::Error::Io(_) => CliError::Data(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

/// Any failure while reading `path` is a data error, reported with the path.
pub fn in_file(path: impl Display, e: impl Into<msyds::Error>) -> CliError {
    match e.into() {
        e @ msyds::Error::GuardExceeded(_) => CliError::from(e),
        e => CliError::Data(format!("{path}: {e}")),
    }
}

pub type CliResult<T> = Result<T, CliError>;

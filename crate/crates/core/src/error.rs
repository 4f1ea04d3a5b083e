use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A text input could not be parsed. `line` is 1-based.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An exhaustive procedure was asked to run on an instance larger than its configured limits.
    #[error("instance exceeds guard: {0}")]
    GuardExceeded(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("word length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("word length {0} outside 1..=64")]
    BadLength(usize),

    #[error("basis vector {index} is linearly dependent on the preceding vectors")]
    DependentBasis { index: usize },

    #[error("code is not doubly even: {0}")]
    NotDoublyEven(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("word {0} is not in the code")]
    NotInCode(String),

    #[error("subspaces are not complementary: {0}")]
    NotComplementary(String),

    #[error("unknown built-in '{0}'")]
    UnknownBuiltin(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed {format} data: {reason}")]
    Format { format: &'static str, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn format(format: &'static str, reason: impl Into<String>) -> Self {
        Error::Format {
            format,
            reason: reason.into(),
        }
    }
}

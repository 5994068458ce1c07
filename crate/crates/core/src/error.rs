use std::io;

use thiserror::Error;

/// Errors produced by the clustering library.
#[derive(Debug, Error)]
pub enum Error {
    /// Structurally invalid input: out-of-range ids, bad probabilities,
    /// mismatched universes, empty edge sets.
    #[error("invalid input: {0}")]
    Input(String),

    /// A text file could not be parsed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An exhaustive computation was asked to exceed its hard size limit.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}

use std::io;

use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("{what}: expected length {expected}, got {actual}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("{0} must be a nonzero vector")]
    ZeroVector(&'static str),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid probability {name} = {value}")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("causality violated: |v_boost| = {v_boost} must be below v_limit = {v_limit}")]
    Causality { v_boost: f64, v_limit: f64 },

    #[error("malformed {kind}: {msg}")]
    Format { kind: &'static str, msg: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn format(kind: &'static str, msg: impl Into<String>) -> Self {
        Error::Format {
            kind,
            msg: msg.into(),
        }
    }

    /// True for failures caused by the filesystem rather than by bad input.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

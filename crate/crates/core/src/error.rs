//! Crate-wide error type.

use std::fmt;
use std::path::PathBuf;

/// Errors produced by construction, parsing, and numerical routines.
#[derive(Debug)]
pub enum Error {
    /// An argument or configuration value failed validation.
    InvalidInput(String),
    /// A tabulated data file was rejected. `line` is 1-based.
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    /// A quantity that must stay finite became NaN or infinite.
    NonFinite(String),
    /// A linear solve hit a vanishing pivot.
    Singular(String),
    /// Reading or writing a file failed.
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Parse {
                path,
                line,
                message,
            } => write!(f, "{}:{line}: {message}", path.display()),
            Error::NonFinite(msg) => write!(f, "non-finite value: {msg}"),
            Error::Singular(msg) => write!(f, "singular system: {msg}"),
            Error::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

//! Crate-wide error type.
//!
//! Errors are grouped so the CLI can map them onto stable exit codes:
//! configuration problems exit 1, data problems exit 2, numerical
//! failures exit 3.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A single record failed to parse (no file context yet).
    #[error("{0}")]
    Parse(String),

    /// A record-level failure attributed to a line of an input file.
    #[error("line {line}: {message}")]
    Data { line: usize, message: String },

    /// An attack label that the loaded taxonomy does not know.
    #[error("line {line}: unknown attack label `{label}`")]
    UnknownLabel { line: usize, label: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// Malformed checkpoint or encoding artifact.
    #[error("bad artifact: {0}")]
    Artifact(String),

    /// Non-finite losses, scores or other numerical breakdown.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// Process exit code for the CLI: 1 usage/config, 2 data, 3 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Io(_)
            | Error::Parse(_)
            | Error::Data { .. }
            | Error::UnknownLabel { .. }
            | Error::Dimension(_)
            | Error::Artifact(_) => 2,
            Error::Numerical(_) => 3,
        }
    }
}

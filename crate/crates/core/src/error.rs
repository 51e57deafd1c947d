//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Filesystem failure, tagged with the offending path.
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Malformed input file content, tagged with the 1-based line number.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A dataset invariant does not hold for a specific example.
    #[error("example {id}: {msg}")]
    Example { id: String, msg: String },

    /// A matched-pair record is invalid.
    #[error("pair {id}: {msg}")]
    Pair { id: String, msg: String },

    /// Bad arguments or configuration.
    #[error("{0}")]
    InvalidInput(String),

    /// Cohen's kappa is undefined because expected agreement equals 1.
    #[error("kappa undefined: expected agreement equals 1")]
    KappaUndefined,

    /// A tree split references a feature the input vector does not carry.
    #[error("input vector is missing feature '{0}' required by a tree split")]
    MissingFeature(String),

    /// GH sampling asked for more examples than the eligible pool holds.
    #[error("class '{label}': requested {requested} samples but only {eligible} eligible")]
    GhPoolTooSmall {
        label: String,
        requested: usize,
        eligible: usize,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn example(id: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Example {
            id: id.into(),
            msg: msg.into(),
        }
    }
}

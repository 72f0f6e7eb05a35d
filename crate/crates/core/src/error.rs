use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Parameters outside the range an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// Inputs whose sizes or shapes do not fit together.
    #[error("shape error: {0}")]
    Shape(String),

    /// A code set whose column counts are not all equal.
    #[error("regularity error: {0}")]
    Regularity(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// An exhaustive computation refused because it would exceed its guard.
    #[error("guard exceeded: {0}")]
    Guard(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn shape(msg: impl Into<String>) -> Error {
    Error::Shape(msg.into())
}

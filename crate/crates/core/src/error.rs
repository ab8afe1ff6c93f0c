use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A terminating series hit a vanishing denominator before terminating.
    #[error("pole in {0}")]
    Pole(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// Wrong number of coordinates, axes or quantum numbers.
    #[error("arity mismatch: {0}")]
    Arity(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("invalid parameters: {0}")]
    Params(String),

    #[error("usage: {0}")]
    Usage(String),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

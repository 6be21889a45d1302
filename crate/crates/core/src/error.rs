use thiserror::Error;

/// Errors raised by the combinatorial and geometric operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A size or index parameter is outside the supported range.
    #[error("out of range: {0}")]
    Range(String),
    /// Arguments are individually valid but do not fit together.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A list that should be a strict chain is not one.
    #[error("not a chain: {0}")]
    Chain(String),
    /// Geometric input is degenerate (coincident points, non-finite coordinates).
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// Textual or JSON input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn range<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Range(msg.into()))
}

pub(crate) fn argument<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}

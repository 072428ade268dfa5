use thiserror::Error;

/// Errors raised by the library layer.
///
/// The CLI maps these onto exit codes: parse errors are usage errors,
/// precision and truncation failures are reported separately from plain
/// domain errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("level error: denominator {den} does not divide modulus {modulus}")]
    Level { den: u64, modulus: u64 },

    #[error("pole: {0}")]
    Pole(String),

    #[error("precision error: {0}")]
    Precision(String),

    #[error("truncation error: {0}")]
    Truncation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

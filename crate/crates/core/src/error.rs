use thiserror::Error;

/// Errors raised by the numeric kernels, the registry loader and the checkers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("divisor enclosure contains zero")]
    DivisorContainsZero,

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("term ratio not contracting: r = {ratio:.4} after {terms} terms")]
    RatioNotContracting { ratio: f64, terms: usize },

    #[error("maximum number of terms ({terms}) exceeded before the tail bound was met")]
    MaxTermsExceeded { terms: usize },

    #[error("pole at k = {k}")]
    PoleAtPoint { k: i64 },

    #[error("bad prime {p}: {reason}")]
    BadPrime { p: u64, reason: String },

    #[error("no congruence case matched p = {p}")]
    NoCaseMatched { p: u64 },

    #[error("schema violation at {pointer}: {message}")]
    SchemaViolation { pointer: String, message: String },

    #[error("duplicate entry id {0:?}")]
    DuplicateId(String),

    #[error("parse error in {input:?}: {message}")]
    Parse { input: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

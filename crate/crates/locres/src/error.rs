use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ring declaration: {0}")]
    Ring(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("reduction step ceiling of {0} exceeded")]
    Ceiling(u64),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Short machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Ring(_) => "ring",
            Error::Dimension(_) => "dimension",
            Error::Domain(_) => "domain",
            Error::Parse { .. } => "parse",
            Error::Precondition(_) => "precondition",
            Error::Inconsistent(_) => "inconsistent",
            Error::Ceiling(_) => "ceiling",
            Error::Unsupported(_) => "unsupported",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degree {degree} exceeds the supported cap of {cap}")]
    DegreeTooLarge { degree: usize, cap: usize },

    #[error("size {requested} exceeds the configured cap of {cap}")]
    SizeTooLarge { requested: u64, cap: u64 },

    #[error("corrupt certificate: {0}")]
    CorruptCertificate(String),

    #[error("no certificate: {0}")]
    NoCertificate(String),

    #[error("linear program failed: {0}")]
    Lp(#[from] crate::lp::LpError),

    #[error("data covers primes up to {covered} but the request needs {needed}")]
    IncompleteRange { covered: u64, needed: u64 },

    #[error("{path}:{line}: {message}")]
    Schema { path: PathBuf, line: u64, message: String },

    #[error("bound violated at p = {p}: |cos theta| = {value}")]
    RamanujanBound { p: u64, value: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for errors caused by the caller's arguments rather than the
    /// environment.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::DegreeTooLarge { .. }
                | Error::SizeTooLarge { .. }
                | Error::NoCertificate(_)
                | Error::IncompleteRange { .. }
                | Error::Schema { .. }
        )
    }
}

use thiserror::Error;

use crate::graph::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed graph document: {0}")]
    Malformed(String),

    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },

    #[error("dangling reference: {0}")]
    DanglingReference(String),

    #[error("graph failed validation ({} violation(s))", .0.len())]
    Invalid(Vec<Violation>),

    #[error("vertex `{0}` has no genus label")]
    MissingGenus(String),

    #[error("graph orientation is not compatible with the involution")]
    NotOriented,

    #[error("{what} exceeds cap {cap}")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid argument: {0}")]
    BadArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Malformed(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

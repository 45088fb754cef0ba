use thiserror::Error;

/// Errors raised by the library. The CLI maps them onto exit codes with [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group parameters: {0}")]
    InvalidParams(String),
    #[error("parameter mismatch: {0}")]
    ParamMismatch(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// 1 for a failed property, 2 for bad input, 3 for a hit resource cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceCap(_) => 3,
            Error::Invariant(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A measure or operation is undefined for the given arguments
    /// (e.g. uniformity of a single-member slate).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A search exceeded its node, time or enumeration budget. Never
    /// accompanied by a partial answer.
    #[error("search incomplete: {0}")]
    Incomplete(String),

    /// The precondition of an axiom check does not hold for the case.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

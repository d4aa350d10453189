use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("not an ideal: {0}")]
    NotAnIdeal(String),
    #[error("not a cocycle: coboundary is nonzero on basis triple ({0}, {1}, {2})")]
    NotACocycle(usize, usize, usize),
    #[error("algebra is not perfect")]
    NotPerfect,
    #[error("simplicity undecided: {0}")]
    SimplicityUndecided(String),
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("window overflow: degree {degree} exceeds bound {bound}")]
    WindowOverflow { degree: u32, bound: u32 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("dimension cap exceeded: {dim} > {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension n = {n} outside the supported range [1, {max}]")]
    DimensionOutOfRange { n: usize, max: usize },

    #[error("point index {index} out of range for a domain of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: expected n = {expected}, got n = {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("malformed truth table: {0}")]
    MalformedTable(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("convex function evaluated outside [0, 1] at {value}")]
    PhiDomain { value: f64 },

    #[error("edge list does not form a tree: {0}")]
    NotATree(String),

    #[error("search space has {count} functions, over the budget of {budget}")]
    BudgetExceeded { count: u128, budget: u128 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

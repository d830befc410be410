use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex set is not symmetric: -v is missing for vertex {0}")]
    NonSymmetric(usize),
    #[error("degenerate vertex set: {0}")]
    Degenerate(String),
    #[error("vertex {0} is not an extreme point of the unit ball")]
    NotExtreme(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point does not have unit norm (norm = {0})")]
    NotUnitNorm(f64),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("linear program failed: {0}")]
    LpFailure(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

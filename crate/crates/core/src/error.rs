use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid must have at least one axis")]
    EmptyGrid,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("axis {axis} has zero unknowns")]
    ZeroAxis { axis: usize },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("fields or spectra belong to different grids")]
    GridMismatch,
    #[error("operator is singular at mode {mode:?} (P(lambda) = {value:e})")]
    SingularOperator { mode: Vec<usize>, value: f64 },
    #[error("matrix is singular: pivot {pivot} vanished")]
    SingularMatrix { pivot: usize },
    #[error("dense oracle limited to n <= {limit}, requested n = {n}")]
    OracleSizeExceeded { n: usize, limit: usize },
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

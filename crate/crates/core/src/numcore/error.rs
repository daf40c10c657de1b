use thiserror::Error;

/// Failures of the dense linear-algebra and integration primitives.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular matrix: pivot {pivot:.3e} in column {col} below tolerance {tol:.3e}")]
    SingularMatrix { col: usize, pivot: f64, tol: f64 },
    #[error("series did not converge within {terms} terms (norm(E)*t^2 too large)")]
    SeriesDiverged { terms: usize },
    #[error("non-finite state at t = {t}")]
    NonFiniteState { t: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type NumResult<T> = Result<T, NumError>;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix dimension {dim} exceeds the guard of {max}")]
    DimensionGuard { dim: usize, max: usize },
    #[error("eigenvalue outside candidate set")]
    EigenvalueOutsideCandidates,
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degenerate middle convolution: quotient has dimension 0")]
    DegenerateConvolution,
    #[error("point is not on the curve")]
    OffCurve,
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

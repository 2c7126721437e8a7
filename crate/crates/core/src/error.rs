use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("endpoint mismatch: expected object {expected}, found object {found}")]
    ObjectMismatch { expected: usize, found: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("unknown object {0}")]
    UnknownObject(usize),
    #[error("matrix is not idempotent: (e·e)[{row}][{col}] differs from e[{row}][{col}]")]
    NotIdempotent { row: usize, col: usize },
    #[error("truncation too small: degree {required} needed, truncation is {truncation}")]
    TruncationExceeded { required: usize, truncation: usize },
    #[error("invalid scalar {0:?}")]
    InvalidScalar(String),
    #[error("{0}")]
    InvalidInput(String),
    #[error("certification failed: {0}")]
    CertificationFailed(String),
}

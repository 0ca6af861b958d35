use thiserror::Error;

use crate::space::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed linear system: {0}")]
    MalformedSystem(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no separating functional: 0 lies in D + K")]
    NoSeparation,
    #[error("alpha must be positive")]
    NonpositiveAlpha,
    #[error("index {index} out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("scale must be positive")]
    NonpositiveScale,
    #[error("invalid convex weights: {0}")]
    InvalidWeights(String),
    #[error("Fourier-Motzkin budget exceeded: {vars} variables > budget {budget}")]
    TooLarge { vars: usize, budget: usize },
    #[error("instance failed validation:\n{0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    ParseRational(#[from] ParseRationalError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub(crate) fn check_index(index: usize, len: usize) -> Result<()> {
    if index < len {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index, len })
    }
}

use thiserror::Error;

/// Errors produced by the diameter algorithms and their building blocks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point set is empty")]
    EmptySet,
    #[error("points must have at least one coordinate")]
    ZeroDimension,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coordinate {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
    #[error("epsilon must lie in (0, 1], got {0}")]
    InvalidEpsilon(f64),
    #[error("cell width must be positive and finite, got {0}")]
    InvalidCellWidth(f64),
    #[error("operation needs dimension at least {needed}, got {found}")]
    DimensionTooSmall { needed: usize, found: usize },
    #[error("direction must be a unit vector (norm {0})")]
    NotUnit(f64),
    #[error("lattice coordinates overflow 64-bit squared distance")]
    LatticeOverflow,
    #[error("input set is not a cell-center rounding")]
    WrongRoundingMode,
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidEpsilon(epsilon))
    }
}

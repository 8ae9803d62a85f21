use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed rational {0:?}")]
    MalformedRational(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("facet {index} has a zero normal")]
    ZeroNormal { index: usize },
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope has empty interior")]
    EmptyInterior,
    #[error("facet {index} is redundant (does not support a facet)")]
    RedundantFacet { index: usize },
    #[error("polytope dimension must be positive")]
    ZeroDimension,
    #[error("point is not in the interior of the polytope")]
    NotInterior,
    #[error("polytope is not integral")]
    NotIntegral,
    #[error("piecewise-affine function has no pieces")]
    EmptyPiecewise,
    #[error("L = {l} must be at least max_P f = {max}")]
    LevelTooSmall { l: Rational, max: Rational },
    #[error("singular linear system")]
    Singular,
    #[error("linear program is {0}")]
    LpFailed(&'static str),
    #[error("Ehrhart interpolation mismatch at m = {m}: polynomial gives {predicted}, count is {counted}")]
    InterpolationMismatch {
        m: u64,
        predicted: Rational,
        counted: Rational,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

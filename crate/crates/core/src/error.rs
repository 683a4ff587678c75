use thiserror::Error;

/// Errors surfaced by the verification pipeline.
///
/// Every arithmetic failure is an ordinary value, never a panic: a
/// verification that hits one of these reports "not verified", which is
/// always a sound answer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite interval endpoint: [{lo:e}, {hi:e}]")]
    NonFinite { lo: f64, hi: f64 },

    #[error("inverted interval bounds: [{lo:e}, {hi:e}]")]
    InvertedBounds { lo: f64, hi: f64 },

    #[error("division by an interval containing zero")]
    DivisionByZeroInterval,

    #[error("atan2 of (0, 0) is undefined")]
    OriginArg,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("no approximate inverse: pivot magnitude {pivot:e} too small")]
    SingularApprox { pivot: f64 },

    #[error("row selection failed: no candidate keeps sigma_min above {delta:e}")]
    RankSelectionFailed { delta: f64 },

    #[error("newton iteration hit a singular jacobian")]
    NewtonSingular,

    #[error("newton iteration diverged")]
    NewtonDiverged,

    #[error("degenerate tetrahedron shape (z equal to 0 or 1)")]
    DegenerateShape,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

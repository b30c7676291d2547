use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Variants are grouped by how the command-line surface reports them:
/// input problems, mathematical degeneracy, and internal faults.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("moment of order {order} is unavailable (only {available} moments supplied)")]
    MomentUnavailable { order: usize, available: usize },
    #[error("modifier polynomial must not be identically zero")]
    ZeroModifier,
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("weight is not normalized: total mass is {0}, expected 1")]
    NotNormalized(String),
    #[error("functional is not quasi-definite: norm h_{0} vanishes")]
    NonQuasiDefinite(usize),
    #[error("kernel polynomial degenerates: p_{0}(zeta) = 0")]
    KernelDegenerate(usize),
    #[error("determinant Delta_{0} vanishes")]
    DegenerateDeterminant(usize),
    #[error("beta is identically one")]
    BetaEqualsOne,
    #[error("alpha is identically zero")]
    ZeroAlpha,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("elimination for the degree-1 system degenerates: {0}")]
    NotQuadratic(String),
    #[error("polynomial {index} has degree {found:?}, expected {expected}")]
    DegreeMismatch {
        index: usize,
        expected: usize,
        found: Option<usize>,
    },
    #[error("test polynomial has degree {degree}, exceeding kernel degree {max}")]
    DegreeTooHigh { degree: usize, max: usize },
    #[error("invalid degree: {0}")]
    InvalidDegree(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

impl Error {
    /// Stable machine-readable name used in JSON error documents.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroPolynomial => "zero-polynomial",
            Error::NotSquare { .. } => "not-square",
            Error::MomentUnavailable { .. } => "moment-unavailable",
            Error::ZeroModifier => "zero-modifier",
            Error::InvalidWeight(_) => "invalid-weight",
            Error::NotNormalized(_) => "not-normalized",
            Error::NonQuasiDefinite(_) => "non-quasi-definite",
            Error::KernelDegenerate(_) => "kernel-degenerate",
            Error::DegenerateDeterminant(_) => "degenerate-determinant",
            Error::BetaEqualsOne => "beta-equals-one",
            Error::ZeroAlpha => "zero-alpha",
            Error::HypothesisViolated(_) => "hypothesis-violated",
            Error::NotQuadratic(_) => "not-quadratic",
            Error::DegreeMismatch { .. } => "degree-mismatch",
            Error::DegreeTooHigh { .. } => "degree-too-high",
            Error::InvalidDegree(_) => "invalid-degree",
            Error::Parse(_) => "parse",
            Error::InternalInconsistency(_) => "internal-inconsistency",
        }
    }

    /// True for failures caused by the mathematics rather than by the input.
    pub fn is_degeneracy(&self) -> bool {
        matches!(
            self,
            Error::NonQuasiDefinite(_)
                | Error::KernelDegenerate(_)
                | Error::DegenerateDeterminant(_)
                | Error::NotQuadratic(_)
                | Error::InternalInconsistency(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

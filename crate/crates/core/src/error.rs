use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("probabilities must be positive and sum to exactly 1 (sum = {sum})")]
    ProbabilitySum { sum: String },
    #[error("the solvency cone does not contain the nonnegative orthant")]
    OrthantNotContained,
    #[error("K intersected with M has empty interior in M")]
    EmptyInterior,
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },
    #[error("vertex representation requested for a system with strict inequalities")]
    StrictUnsupported,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("negative scale factor {0}")]
    NegativeScale(String),
    #[error("level {0} is outside [0, 1]")]
    BadLevel(String),
    #[error("scalarization requires d = m = 1")]
    DimensionNotOne,
    #[error("unknown law `{0}`")]
    UnknownLaw(String),
    #[error("unknown correspondence direction `{0}`")]
    UnknownDirection(String),
    #[error("base set for star-shapedness is empty")]
    EmptyBaseSet,
    #[error("the measure value is empty and no sampled anchors were requested")]
    EmptyValue,
    #[error("every separating dual generator is orthogonal to M")]
    OnlyOrthogonalSeparators,
    #[error("position is rejected by member {0} of the family")]
    NotInIntersection(usize),
    #[error("the eligible subspace is not the whole space")]
    SubspaceNotFull,
    #[error("invalid bid-ask spread matrix: {0}")]
    InvalidSpread(String),
    #[error("portfolio is not in the eligible subspace")]
    NotEligible,
    #[error("member {0} is not a convex acceptance constructor")]
    NonConvexMember(usize),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}

impl Error {
    /// Errors signalling a degenerate mathematical regime rather than bad input.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::EmptyValue
                | Error::OnlyOrthogonalSeparators
                | Error::NotInIntersection(_)
                | Error::SubspaceNotFull
                | Error::PreconditionFailed(_)
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::ProbabilitySum { .. } => "ProbabilitySum",
            Error::OrthantNotContained => "OrthantNotContained",
            Error::EmptyInterior => "EmptyInterior",
            Error::MalformedDocument(_) => "MalformedDocument",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::StrictUnsupported => "StrictUnsupported",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NegativeScale(_) => "NegativeScale",
            Error::BadLevel(_) => "BadLevel",
            Error::DimensionNotOne => "DimensionNotOne",
            Error::UnknownLaw(_) => "UnknownLaw",
            Error::UnknownDirection(_) => "UnknownDirection",
            Error::EmptyBaseSet => "EmptyBaseSet",
            Error::EmptyValue => "EmptyValue",
            Error::OnlyOrthogonalSeparators => "OnlyOrthogonalSeparators",
            Error::NotInIntersection(_) => "NotInIntersection",
            Error::SubspaceNotFull => "SubspaceNotFull",
            Error::InvalidSpread(_) => "InvalidSpread",
            Error::NotEligible => "NotEligible",
            Error::NonConvexMember(_) => "NonConvexMember",
            Error::PreconditionFailed(_) => "PreconditionFailed",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

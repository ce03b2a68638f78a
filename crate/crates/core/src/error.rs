use thiserror::Error;

/// Errors raised by the geometric library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("invalid object: {0}")]
    InvalidObject(String),

    #[error("wrong number of objects: expected {expected}, got {got}")]
    WrongCount { expected: usize, got: usize },

    #[error("negative input value {0}")]
    NegativeInput(f64),

    #[error("no common tangent (radicand {0:.3e} is negative)")]
    NoCommonTangent(f64),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("umbilical datum has squared norm {0} too close to ±1")]
    DegenerateDatum(f64),

    #[error("Gram matrix is not degenerate")]
    NotDegenerate,

    #[error("no spacelike normal found in the kernel")]
    NormalSearchFailed,

    #[error("kernel vector residual {0:.3e} too large")]
    NoReliableKernel(f64),

    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),

    #[error("point lies outside the open unit ball")]
    OutsideBall,

    #[error("argument {0} lies outside the function domain")]
    OutOfDomain(f64),

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("generator failed to find a generic configuration after {0} attempts")]
    RejectionLimit(usize),
}

pub type Result<T> = std::result::Result<T, GeomError>;

impl GeomError {
    /// Stable machine-readable name used in CLI reports.
    pub fn kind(&self) -> &'static str {
        match self {
            GeomError::DimensionMismatch { .. } => "DimensionMismatch",
            GeomError::NotSymmetric { .. } => "NotSymmetric",
            GeomError::InvalidObject(_) => "InvalidObject",
            GeomError::WrongCount { .. } => "WrongCount",
            GeomError::NegativeInput(_) => "NegativeInput",
            GeomError::NoCommonTangent(_) => "NoCommonTangent",
            GeomError::HypothesisViolated(_) => "HypothesisViolated",
            GeomError::DegenerateDatum(_) => "DegenerateDatum",
            GeomError::NotDegenerate => "NotDegenerate",
            GeomError::NormalSearchFailed => "NormalSearchFailed",
            GeomError::NoReliableKernel(_) => "NoReliableKernel",
            GeomError::InfeasibleParams(_) => "InfeasibleParams",
            GeomError::OutsideBall => "OutsideBall",
            GeomError::OutOfDomain(_) => "OutOfDomain",
            GeomError::InvalidTolerance(_) => "InvalidTolerance",
            GeomError::RejectionLimit(_) => "RejectionLimit",
        }
    }
}

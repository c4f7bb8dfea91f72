use thiserror::Error;

/// Errors produced by series arithmetic, certification, and evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coefficient list must be non-empty")]
    EmptyCoefficients,

    #[error("series must be normalized (constant term 0, linear term 1)")]
    NotNormalized,

    #[error("inner series must fix the origin (zero constant term)")]
    ConstantTermNotZero,

    #[error("output degree must be at least 1")]
    DegreeTooSmall,

    #[error("radius must be non-negative, got {0}")]
    NegativeRadius(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("factor index range invalid: {0}")]
    InvalidRange(String),

    #[error("family does not certify: {0}")]
    DivergentFamily(String),

    #[error("outside certified disk: radius {radius} exceeds limit {limit}")]
    OutsideCertifiedDisk { radius: f64, limit: f64 },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the operator and form computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A vector lies outside the domain of the requested operator.
    #[error("domain error: {0}")]
    Domain(String),

    /// A rational function was evaluated at a zero of its denominator.
    #[error("pole: denominator vanishes at {0}")]
    Pole(String),

    /// A log term was evaluated on (or within the exclusion tube of) its branch cut.
    #[error("branch cut: {0}")]
    BranchCut(String),

    /// Evaluation at the isolated singular point z = i.
    #[error("singular point: {0}")]
    SingularPoint(String),

    /// Arithmetic between values of the real-alpha and complex-z engines.
    #[error("engine mismatch: {0}")]
    EngineMismatch(String),

    /// An exact computation was requested for a parameter that has no exact representation.
    #[error("not exact: {0}")]
    NotExact(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

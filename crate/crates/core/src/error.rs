use thiserror::Error;

/// Errors raised by the algebra engine.
///
/// Verification *failures* (a check that does not hold) are not errors; they
/// are reported through [`crate::verifier::CheckResult`]. The variants here
/// signal invalid input or internal inconsistencies.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible size: dimension {dim} exceeds the guard {guard}")]
    InfeasibleSize { dim: usize, guard: usize },

    #[error("truncation mismatch: {left} vs {right}")]
    ParamsMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("substitution argument has a nonzero constant term")]
    NotNilpotent,

    #[error("coefficient of x^{a} y^{b} is not 2-integral: {value}")]
    NotTwoIntegral { a: usize, b: usize, value: String },

    #[error("degree bookkeeping overflow: {0}")]
    DegreeOverflow(String),

    #[error("formal inverse recursion failed at degree {0}")]
    RecursionFailure(usize),

    #[error("involution for {group} is not an involution: t(t({witness})) differs")]
    NotAnInvolution { group: String, witness: String },

    #[error("unknown group `{0}` (expected G1..G17)")]
    UnknownGroup(String),

    #[error("special basis for {0} has not been verified")]
    BasisNotVerified(String),
}

pub type Result<T> = std::result::Result<T, Error>;

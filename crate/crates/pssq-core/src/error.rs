//! Crate-wide error type.

/// Errors surfaced by the library. Resource-class errors (`ResourceLimit`,
/// `FactorizationLimit`) signal that a cheaper oracle or a smaller input is
/// needed; the remaining variants are input-validation failures.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A floating evaluation landed within its certified error of an integer
    /// boundary; the caller must switch to exact mode.
    #[error("ambiguous floor: {0}")]
    AmbiguousFloor(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// `S > N^c`; averaged counts are only meaningful for `S <= N^c`.
    #[error("meaningless range: {0}")]
    MeaninglessRange(String),

    #[error("factorization limit: {0}")]
    FactorizationLimit(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    /// All monomial terms ascend and `Z1 = 0`: the infimum sits on an open
    /// boundary and no balancing point exists.
    #[error("empty direction: {0}")]
    EmptyDirection(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("even modulus: {0} (Jacobi symbol requires an odd modulus)")]
    EvenModulus(u64),

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample count N must be odd (got {0})")]
    NOddRequired(u64),
    #[error("m = N*b is not an integer (N = {n}, b = {p}/{q})")]
    NonIntegerM { n: u64, p: u64, q: u64 },
    #[error("dimension M = {m} exceeds sample count N = {n}")]
    DimensionOrder { m: u64, n: u64 },
    #[error("extension period b must exceed 1")]
    PeriodTooSmall,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("division by zero")]
    DivideByZero,
    #[error("domain error: {0}")]
    DomainError(String),

    #[error("degree {degree} is too large (limit {limit})")]
    DegreeTooLarge { degree: usize, limit: usize },
    #[error("lost orthogonality at degree {degree}: |rho| = {rho}")]
    LostOrthogonality { degree: usize, rho: f64 },
    #[error("two evaluation forms disagree: relative difference {0:e}")]
    FormMismatch(f64),

    #[error("no band: cos(beta) = {0} >= 1")]
    NoBand(f64),
    #[error("argument outside domain: {0}")]
    OutOfDomain(String),
    #[error("quadrature failed to converge: estimated error {0:e}")]
    QuadratureFailure(f64),
    #[error("point lies on the branch cut")]
    OnCut,
    #[error("no root: {0}")]
    NoRoot(String),
    #[error("root bracket failure: {0}")]
    BracketFailure(String),

    #[error("point outside the validity regime: {0}")]
    OutsideRegime(String),
    #[error("point outside the local disc")]
    OutsideDisc,
    #[error("argument outside the implemented envelope: {0}")]
    EnvelopeExceeded(String),

    #[error("expected {expected} samples, got {got}")]
    SampleCountMismatch { expected: usize, got: usize },
    #[error("coefficient sequence has support beyond the cutoff and no decay envelope")]
    NoEnvelope,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

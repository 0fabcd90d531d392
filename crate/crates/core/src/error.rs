//! Error type shared by all engine modules.

use thiserror::Error;

/// Errors produced by the construction and verification pipeline.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("unsupported family/rank pair: {0}{1}")]
    UnsupportedFamilyRank(String, usize),
    #[error("weight marks must not all be zero")]
    ZeroWeight,
    #[error("Weyl group order exceeds cap {cap} (reached {reached})")]
    GroupTooLarge { cap: usize, reached: usize },
    #[error("coefficient field mismatch: sqrt({0}) vs sqrt({1})")]
    FieldMismatch(u64, u64),
    #[error("inhomogeneous element: degrees {0} and {1} both occur")]
    Inhomogeneous(String, String),
    #[error("Weyl pullback produced a negative lambda exponent {0}")]
    NegativeLambdaExponent(String),
    #[error("element is not invariant under simple reflection {0}")]
    NotInvariant(usize),
    #[error("element lies outside the strict lambda-Fourier ring: {0}")]
    NotInRing(String),
    #[error("reduction stalled; no dominant leading term in remainder: {0}")]
    ReductionStall(String),
    #[error("symbolic Jacobian determinant differs from the closed product formula")]
    MismatchWithClosedForm,
    #[error("pencil ansatz has no solution over the configured field")]
    NoSolution,
    #[error("pencil ansatz has {0} unknowns, exceeding the solver cap {1}")]
    SolverCapExceeded(usize, usize),
    #[error("solution requires a field extension; minimal polynomial {0}")]
    NonRationalSolution(String),
    #[error("rewrite into generators failed: {0}")]
    RewriteFailure(String),
    #[error("pushforward metric is not linear in lambda; offending entries: {0}")]
    NotLinearInLambda(String),
    #[error("lambda-linear part eta is degenerate (det identically zero)")]
    DegenerateEta,
    #[error("metric is singular (determinant identically zero)")]
    SingularMetric,
    #[error("characteristic polynomial of A differs between sample points")]
    NonConstantSpectrum,
    #[error("degree spectrum contains a non-rational eigenvalue; residual factor {0}")]
    NonRationalEigenvalue(String),
    #[error("degree spectrum contains a non-positive degree {0}")]
    NonPositiveDegree(String),
    #[error("operator A is not diagonalizable at the sample point")]
    NotDiagonalizable,
    #[error("no flat chart over the configured fields; obstruction {0}")]
    NoChartInField(String),
    #[error("chart normalization left residual freedom: {0}")]
    UnderdeterminedNormalization(String),
    #[error("chart Jacobian is identically singular")]
    SingularChartJacobian,
    #[error("potential integration failed; witness {0}")]
    IntegrabilityFailure(String),
    #[error("resonant shift at base point: A(0) - d - {0}*kappa is singular")]
    ResonantShift(usize),
    #[error("bad base point: {0}")]
    BadBasePoint(String),
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the construction and verification pipeline.
///
/// Failed identity checks are *not* errors; they come back as verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero polynomial")]
    DivisionByZero,

    #[error("inexact division: divisor does not divide dividend")]
    InexactDivision,

    #[error("parameter constraint violated: {0}")]
    InvalidParameter(String),

    #[error("Pearson psi must have degree >= 1 (got a constant)")]
    ConstantPsi,

    #[error("indefinite or degenerate functional at step {step}")]
    DegenerateFunctional { step: usize },

    #[error("moments unavailable: {0}")]
    MomentsUnavailable(String),

    #[error("non-polynomial lift: coefficient of t^{power} has the wrong parity for rho^{m}")]
    NonPolynomialLift { power: usize, m: usize },

    #[error("Case II requires even w2")]
    CaseTwoRequiresEven,

    #[error("Case II requires a symmetric interval (-d, d) for w2")]
    CaseTwoRequiresSymmetricInterval,

    #[error("invalid rho: {0}")]
    InvalidRho(String),

    #[error("weight not expressible in factored polynomial form: {0}")]
    NotFactorable(String),

    #[error("eta is not absorbable by row scaling: {0}")]
    EtaNotClearable(String),

    #[error("non-polynomial entries: {}", .0.join(", "))]
    NonPolynomialEntries(Vec<String>),

    #[error("symmetrizer invalid: {0}")]
    InvalidSymmetrizer(String),

    #[error("decomposition input invalid: {0}")]
    InvalidDecomposition(String),

    #[error("decomposition identity violated")]
    DecompositionIdentity,

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("Pearson pair invalid: {0}")]
    InvalidPair(String),

    #[error("no symmetrizer within bounds (deg_bound = {0})")]
    NoSymmetrizer(u32),

    #[error("operator requires a verified Pearson pair")]
    UnverifiedPair,

    #[error("expansion left a nonzero residual (basis incomplete up to degree {0})")]
    ExpansionResidual(usize),

    #[error("root bracketing failed for {0}")]
    RootBracketing(String),

    #[error("unknown family '{0}'")]
    UnknownFamily(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

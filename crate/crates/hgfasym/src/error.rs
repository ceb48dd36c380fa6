use thiserror::Error;

/// Every failure the library can report.
///
/// Variants are grouped loosely by the module that raises them; the FFI layer
/// maps each one onto a stable integer code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at non-positive integer {0}")]
    PoleAtNonPositiveInteger(String),
    #[error("argument modulus {modulus} is below the Stirling cutoff {cutoff}")]
    BelowThreshold { modulus: f64, cutoff: f64 },
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),

    #[error("series does not converge (|z| = {0})")]
    NonConvergent(f64),
    #[error("lower parameter c is a non-positive integer and the series does not terminate first")]
    UndefinedC,
    #[error("hypergeometric function diverges at z = 1 (Re(c-a-b) <= 0)")]
    DivergesAtOne,
    #[error("connection formula is degenerate: {0}")]
    DegenerateConnection(String),
    #[error("parameters outside the domain of the representation: {0}")]
    ParameterDomain(String),
    #[error("the point 1/z lies on the integration path")]
    SingularityOnPath,
    #[error("the contour encloses the critical point 1/z or crosses its cut")]
    ContourEnclosesCriticalPoint,
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("point lies on a branch cut of the phase function")]
    OnBranchCut,
    #[error("point is a singularity of the phase or amplitude")]
    AtSingularity,
    #[error("saddle of order {0} is not supported by the second-order approximation")]
    HigherOrderSaddle(u32),
    #[error("path tracing stalled near a singularity at t = {0}")]
    StallNearSingularity(String),
    #[error("integration path meets a singularity: {0}")]
    PathSingularity(String),

    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("z = 1 is excluded for this expansion")]
    ExcludedPoint,
    #[error("z = 1 exactly: the pole/branch term has a (1-z) denominator")]
    AtOne,
    #[error("saddle points coalesce")]
    CoalescentSaddles,
    #[error("real lambda or real z: use the dominant-saddle expansion")]
    RealInputsUseDominant,
    #[error("transformation is degenerate: {0}")]
    DegenerateTransformation(String),

    #[error("system too large for exact enumeration (min(p,t) = {0})")]
    SizeGuard(u64),
    #[error("p + t > N: apply the holes complement first")]
    ComplementRequired,

    #[error("reference value is zero")]
    ReferenceZero,
    #[error("configuration error: {0}")]
    Config(String),
    #[error("reference value is unreliable (estimated relative error {0:e})")]
    UnreliableReference(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short kebab-case name, stable across releases.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::PoleAtNonPositiveInteger(_) => "pole",
            Error::BelowThreshold { .. } => "below-threshold",
            Error::InvalidPrecision(_) => "invalid-precision",
            Error::NonConvergent(_) => "non-convergent",
            Error::UndefinedC => "undefined-c",
            Error::DivergesAtOne => "diverges-at-one",
            Error::DegenerateConnection(_) => "degenerate-connection",
            Error::ParameterDomain(_) => "parameter-domain",
            Error::SingularityOnPath => "singularity-on-path",
            Error::ContourEnclosesCriticalPoint => "contour-encloses-critical-point",
            Error::InvalidInput(_) => "invalid-input",
            Error::OnBranchCut => "on-branch-cut",
            Error::AtSingularity => "at-singularity",
            Error::HigherOrderSaddle(_) => "higher-order-saddle",
            Error::StallNearSingularity(_) => "stall-near-singularity",
            Error::PathSingularity(_) => "path-singularity",
            Error::DomainViolation(_) => "domain-violation",
            Error::ExcludedPoint => "excluded-point",
            Error::AtOne => "at-one",
            Error::CoalescentSaddles => "coalescent-saddles",
            Error::RealInputsUseDominant => "real-inputs-use-dominant",
            Error::DegenerateTransformation(_) => "degenerate-transformation",
            Error::SizeGuard(_) => "size-guard",
            Error::ComplementRequired => "complement-required",
            Error::ReferenceZero => "reference-zero",
            Error::Config(_) => "config",
            Error::UnreliableReference(_) => "unreliable-reference",
        }
    }

    /// Stable positive integer code; the C interface returns its negation.
    pub fn code(&self) -> i32 {
        match self {
            Error::PoleAtNonPositiveInteger(_) => 1,
            Error::BelowThreshold { .. } => 2,
            Error::InvalidPrecision(_) => 3,
            Error::NonConvergent(_) => 10,
            Error::UndefinedC => 11,
            Error::DivergesAtOne => 12,
            Error::DegenerateConnection(_) => 13,
            Error::ParameterDomain(_) => 14,
            Error::SingularityOnPath => 15,
            Error::ContourEnclosesCriticalPoint => 16,
            Error::InvalidInput(_) => 17,
            Error::OnBranchCut => 20,
            Error::AtSingularity => 21,
            Error::HigherOrderSaddle(_) => 22,
            Error::StallNearSingularity(_) => 23,
            Error::PathSingularity(_) => 24,
            Error::DomainViolation(_) => 30,
            Error::ExcludedPoint => 31,
            Error::AtOne => 32,
            Error::CoalescentSaddles => 33,
            Error::RealInputsUseDominant => 34,
            Error::DegenerateTransformation(_) => 35,
            Error::SizeGuard(_) => 40,
            Error::ComplementRequired => 41,
            Error::ReferenceZero => 50,
            Error::Config(_) => 51,
            Error::UnreliableReference(_) => 52,
        }
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad outcome class, used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Inapplicable,
    Oracle,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid mapping: {0}")]
    InvalidMapping(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("singular evaluation point: {0}")]
    SingularPoint(String),

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("invalid exponents: {0}")]
    InvalidExponents(String),

    #[error("unbounded dilatation: exponent p(a-1)-(a*gamma-n) = {exponent} < 0")]
    UnboundedDilatation { exponent: f64 },

    #[error("unbounded essential sup of the Jacobian: exponent a*gamma-n = {exponent} < 0")]
    UnboundedJacobian { exponent: f64 },

    #[error("divergent Jacobian integral: a = {a} must exceed {threshold}")]
    DivergentIntegral { a: f64, threshold: f64 },

    #[error("empty admissible range for a: lower {lower} >= upper {upper}")]
    EmptyAdmissibleRange { lower: f64, upper: f64 },

    #[error("domain is not convex: {0}")]
    NonConvex(String),

    #[error("Poincare estimate outside its validity range: delta = {delta} must be in [0, {limit})")]
    PoincareValidity { delta: f64, limit: f64 },

    #[error("root bracketing failed: {0}")]
    BracketFailure(String),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("inapplicable bound: {0}")]
    Inapplicable(String),

    #[error("every printed-formula evaluation point is invalid ({invalid} of {total})")]
    AllPrintedPointsInvalid { invalid: usize, total: usize },

    #[error("no applicable route: {0}")]
    NoApplicableRoute(String),

    #[error("requested {k} eigenpairs but the operator has only {dof} degrees of freedom")]
    TooManyEigenpairs { k: usize, dof: usize },

    #[error("degenerate triangle {index}: aspect ratio {aspect:.3e}")]
    DegenerateTriangle { index: usize, aspect: f64 },

    #[error("domain under-resolved: {count} interior voxels")]
    UnderResolved { count: usize },

    #[error("inner solver stagnated: {trace}")]
    SolverStagnation { trace: String },

    #[error("eigensolver did not converge: {trace}")]
    NotConverged { trace: String },

    #[error("mass matrix is not positive definite")]
    IndefiniteMass,

    #[error("unsupported domain for this oracle: {0}")]
    UnsupportedOracle(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config(_)
            | Error::Io(_)
            | Error::InvalidDomain(_)
            | Error::InvalidMapping(_)
            | Error::DimensionMismatch { .. }
            | Error::InvalidExponents(_) => ErrorClass::Config,
            Error::TooManyEigenpairs { .. }
            | Error::DegenerateTriangle { .. }
            | Error::UnderResolved { .. }
            | Error::SolverStagnation { .. }
            | Error::NotConverged { .. }
            | Error::IndefiniteMass
            | Error::UnsupportedOracle(_) => ErrorClass::Oracle,
            _ => ErrorClass::Inapplicable,
        }
    }

    /// Stable one-word tag used in machine-readable error lines.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::InvalidDomain(_) => "invalid-domain",
            Error::InvalidMapping(_) => "invalid-mapping",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::SingularPoint(_) => "singular-point",
            Error::NonFinite(_) => "non-finite",
            Error::InvalidExponents(_) => "invalid-exponents",
            Error::UnboundedDilatation { .. } => "unbounded-dilatation",
            Error::UnboundedJacobian { .. } => "unbounded-jacobian",
            Error::DivergentIntegral { .. } => "divergent-integral",
            Error::EmptyAdmissibleRange { .. } => "empty-admissible-range",
            Error::NonConvex(_) => "non-convex",
            Error::PoincareValidity { .. } => "poincare-validity",
            Error::BracketFailure(_) => "bracket-failure",
            Error::Quadrature(_) => "quadrature",
            Error::Inapplicable(_) => "inapplicable",
            Error::AllPrintedPointsInvalid { .. } => "all-printed-points-invalid",
            Error::NoApplicableRoute(_) => "no-applicable-route",
            Error::TooManyEigenpairs { .. } => "too-many-eigenpairs",
            Error::DegenerateTriangle { .. } => "degenerate-triangle",
            Error::UnderResolved { .. } => "under-resolved",
            Error::SolverStagnation { .. } => "solver-stagnation",
            Error::NotConverged { .. } => "not-converged",
            Error::IndefiniteMass => "indefinite-mass",
            Error::UnsupportedOracle(_) => "unsupported-oracle",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }
}

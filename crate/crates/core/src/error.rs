use thiserror::Error;

/// Errors raised anywhere in the chain construction pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigenvalue iteration did not converge after {iterations} sweeps")]
    NoConvergence { iterations: usize },

    #[error("degenerate spectrum: minimum eigenvalue gap {gap:e} below threshold {threshold:e}")]
    DegenerateSpectrum { gap: f64, threshold: f64 },

    #[error("matrix is singular to working precision (condition estimate {cond:e})")]
    Singular { cond: f64 },

    #[error("matrix is not Hermitian positive-definite: {0}")]
    NotPositiveDefinite(String),

    #[error("ambiguous eigenvalue pairing for eigenvalue index {index}")]
    PairingAmbiguous { index: usize },

    #[error("ill-conditioned biorthogonal basis: Gram residual {residual:e} exceeds {tolerance:e}")]
    IllConditionedBasis { residual: f64, tolerance: f64 },

    #[error("metric operator is ill-conditioned (condition estimate {cond:e})")]
    MetricIllConditioned { cond: f64 },

    #[error("chain depth {depth} too shallow, need at least {required}")]
    DepthTooShallow { depth: usize, required: usize },

    #[error("equivalent statements disagree at tolerance: {0}")]
    InconsistentEquivalence(String),

    #[error("spectrum class is {found}, expected {expected}")]
    WrongSpectrumClass { expected: String, found: String },

    #[error("invalid model specification: {0}")]
    InvalidSpec(String),

    #[error("no closed-form eigensystem for {0}")]
    NoClosedForm(String),

    #[error("symmetry operator {op} is not supported by family {family}")]
    UnsupportedSymmetry { op: String, family: String },

    #[error("unknown node label {0:?}")]
    UnknownNodeLabel(String),

    #[error("chain node {label} failed: {source}")]
    ChainNode {
        label: String,
        #[source]
        source: Box<Error>,
    },

    #[error("chain node {label} violates its invariants: {detail}")]
    NodeInvariant { label: String, detail: String },

    #[error("serialization error: {0}")]
    Serialization(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("element is not hyperbolic (|trace| = {trace})")]
    NotHyperbolic { trace: f64 },
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),
    #[error("quadrature did not converge (estimated error {estimate:e} after {intervals} intervals)")]
    QuadratureNonConvergence { estimate: f64, intervals: usize },
    #[error("enumeration radius {requested} exceeds cap {cap} ({found} elements found within the cap)")]
    EnumerationCap { requested: f64, cap: f64, found: usize },
    #[error("no nontrivial group element within radius {radius}; retry with a larger search radius")]
    EmptyEnumeration { radius: f64 },
    #[error("cochain is not closed (max |d omega| = {defect:e})")]
    NotClosed { defect: f64 },
    #[error("linear solve failed (relative residual {residual:e})")]
    SolveFailed { residual: f64 },
    #[error("eigensolver failed: {message} (worst residual {residual:e})")]
    EigenFailure { message: String, residual: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("eigenvalue {value} within {tolerance:e} of the window boundary at step {step}")]
    BoundaryProximity { value: f64, tolerance: f64, step: usize },
    #[error("mesh level {level} exceeds cap {cap}")]
    LevelCap { level: usize, cap: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid config key `{key}`: {message}")]
    InvalidConfig { key: String, message: String },
    #[error("spectrum not resolved up to {requested} (resolved to {resolved})")]
    Unresolved { requested: f64, resolved: f64 },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

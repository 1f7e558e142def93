use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("degenerate fiber: {0} vanishes")]
    DegenerateFiber(&'static str),
    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no bound state: {0}")]
    NoBoundState(String),
    #[error("singular point: {0}")]
    Singular(String),
    #[error("quantization violation: 2s = {0} is not an integer")]
    QuantizationViolation(f64),
    #[error("quadrature did not converge: value {value:e}, estimated error {error:e}")]
    Quadrature { value: f64, error: f64 },
    #[error("requested {k} eigenvalues from a {points}-point grid (at most points/10)")]
    TooManyEigenvalues { k: usize, points: usize },
    #[error("bisection did not converge for eigenvalue {index}")]
    Bisection { index: usize },
    #[error("grid too coarse: {0} interior points, need at least 50")]
    GridTooCoarse(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

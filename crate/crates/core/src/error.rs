use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expected {expected} neighbour values, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("neighbour vectors must have even length 2d with d >= 1, got {0}")]
    OddLength(usize),

    #[error("non-finite value {value} at position {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("p-laplacian requires p > 1, got p = {0}")]
    InvalidP(f64),

    #[error(
        "p = {p} is too close to 1 for d = {dim}: ellipticity constant {lambda:e} is below \
         the root-finder resolution {resolution:e}"
    )]
    PTooCloseToOne {
        p: f64,
        dim: usize,
        lambda: f64,
        resolution: f64,
    },

    #[error("p-harmonious weight must satisfy 0 <= alpha < 1, got {0}")]
    InvalidAlpha(f64),

    #[error("alpha_from_p requires p >= 2, got {0}")]
    PBelowTwo(f64),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("root finder did not converge after {iterations} iterations (bracket width {width:e})")]
    NoConvergence { iterations: usize, width: f64 },

    #[error("no sign change on [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("declared ellipticity constant {declared} exceeds F(e_{slot}) = {observed}")]
    LambdaContract {
        declared: f64,
        slot: usize,
        observed: f64,
    },

    #[error("point {point:?} is outside the box B_{radius} in dimension {dim}")]
    OutsideBox {
        point: Vec<i64>,
        dim: usize,
        radius: usize,
    },

    #[error("point {0:?} is not an interior point")]
    NotInterior(Vec<i64>),

    #[error("point {0:?} is not a boundary point")]
    NotBoundary(Vec<i64>),

    #[error("isometry maps {from:?} to {to:?}, which is outside the source box")]
    IsometryEscapes { from: Vec<i64>, to: Vec<i64> },

    #[error("invalid isometry: {0}")]
    InvalidIsometry(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("function is not F-harmonic: residual {residual:e} exceeds {tolerance:e}")]
    NotHarmonic { residual: f64, tolerance: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn ensure_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite {
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}

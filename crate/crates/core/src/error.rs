use thiserror::Error;

use crate::quadrature::QuadratureError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("Levy index must satisfy 1 < alpha <= 2, got {0}")]
    InvalidAlpha(f64),
    #[error("parameter `{name}` must be finite and strictly positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("state index must be >= 1, got {0}")]
    InvalidState(i64),
    #[error("position must be finite, got {0}")]
    NonFinitePosition(f64),
    #[error("x_tilde = {0} lies on the well boundary; evaluate a one-sided limit instead")]
    Boundary(f64),
    #[error("q = {re}{im:+}i is within {threshold:e} of a branch cut")]
    NearBranchCut { re: f64, im: f64, threshold: f64 },
    #[error("piece with zero slope admits no half-plane closure")]
    DegenerateClosure,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid scan specification: {0}")]
    InvalidSpec(String),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

use thiserror::Error;

use crate::linalg::EigenResult;

/// Errors raised by the numeric kernels, generators and bound checkers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid p-norm exponent {0}: p must satisfy p >= 1")]
    InvalidPNorm(f64),

    #[error("operator p-norm is only computed for p in {{1, 2, inf}}, got p = {0}")]
    UnsupportedPNorm(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular: pivot {pivot:e} below threshold {threshold:e}")]
    SingularMatrix { pivot: f64, threshold: f64 },

    #[error("QR iteration did not converge after {} iterations", .0.iterations)]
    ConvergenceFailure(Box<EigenResult>),

    #[error("matrix polynomial is not monic (leading coefficient differs from I)")]
    NotMonic,

    #[error("leading coefficient is singular")]
    SingularLeadingCoefficient,

    #[error("oracle size exceeded: {0}")]
    OracleSizeExceeded(String),

    #[error("spectra have different sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),

    #[error("invalid interval: need 0 < b <= a, got a = {a}, b = {b}")]
    BadInterval { a: f64, b: f64 },

    #[error("order {0} too small for this generator")]
    OrderTooSmall(usize),

    #[error("hypothesis violated: {}", .0.join("; "))]
    HypothesisViolation(Vec<String>),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

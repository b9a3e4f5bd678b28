use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("polynomials live in different rings: n = {left} vs n = {right}")]
    RingMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("(g, n) = ({g}, {n}) is unstable: 2 - 2g - n must be negative")]
    Unstable { g: u32, n: usize },

    #[error("polynomial is not symmetric: swapping x_{i} and x_{j} changes it")]
    NotSymmetric { i: usize, j: usize },

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("missing data: {0}")]
    Missing(String),

    #[error("quadrature did not converge: achieved error {achieved:e}")]
    Quadrature { achieved: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

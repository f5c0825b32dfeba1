//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter constraint failed; the message names the violated inequality.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// An iterative solver ran out of iterations.
    #[error("{op} did not converge: residual {residual:.3e} after {iterations} iterations")]
    NonConvergence {
        op: &'static str,
        residual: f64,
        iterations: usize,
    },

    /// A quadrature error estimate stayed above tolerance.
    #[error("{op}: quadrature error estimate {estimate:.3e} above tolerance {tolerance:.3e} (truncation at {truncation:.3e})")]
    QuadratureAccuracy {
        op: &'static str,
        estimate: f64,
        tolerance: f64,
        truncation: f64,
    },

    /// Input rejected (empty sample, degenerate estimate, inadmissible function, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Linear algebra backend failure.
    #[error("linear algebra failure in {op}: {detail}")]
    Linalg { op: &'static str, detail: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn linalg(op: &'static str, e: impl std::fmt::Display) -> Self {
        Error::Linalg {
            op,
            detail: e.to_string(),
        }
    }
}

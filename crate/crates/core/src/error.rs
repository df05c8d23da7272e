use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is singular to working precision (pivot {pivot:.3e} at column {column}, threshold {threshold:.3e}){diagnostic}")]
    Singular {
        column: usize,
        pivot: f64,
        threshold: f64,
        diagnostic: String,
    },

    #[error("Neumann series diverged after {iterations} terms (last term norm {last_norm:.3e})")]
    Divergence { iterations: usize, last_norm: f64 },

    #[error("Neumann series did not reach tolerance {tol:.1e} in {max_iter} terms")]
    NotConverged { tol: f64, max_iter: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

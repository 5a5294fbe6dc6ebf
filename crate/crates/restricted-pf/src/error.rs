use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("insufficient arguments: needed {needed}, got {got}")]
    InsufficientArgs { needed: usize, got: usize },
    #[error("{what} did not converge (last residual {residual:e})")]
    NonConvergence { what: String, residual: f64 },
    #[error("argument out of range: {0}")]
    Range(String),
    #[error("pole or branch cut at {0}")]
    Pole(String),
    #[error("sanity gate failed: {0}")]
    Gate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

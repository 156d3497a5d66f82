use thiserror::Error;

/// Failures reported by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("theta series overflow: {0}")]
    Overflow(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),
    #[error("validation failed: {check} residual {residual:e} exceeds {tolerance:e}")]
    Validation { check: String, residual: f64, tolerance: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

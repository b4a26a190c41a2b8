use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("resource cap exceeded: {requested} matrix entries requested, cap is {cap}")]
    ResourceCap { requested: usize, cap: usize },

    #[error("bound regime violated: {0}")]
    Regime(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

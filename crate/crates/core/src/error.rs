use thiserror::Error;

/// Errors raised by the linear-algebra kernels and the Newton drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("empty vector or matrix")]
    Empty,

    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },

    #[error("matrix is numerically singular: pivot {pivot:e} at column {column} (threshold {threshold:e})")]
    Singular {
        column: usize,
        pivot: f64,
        threshold: f64,
    },

    #[error("inner iteration diverged after {iterations} steps (step norm {step_norm:e})")]
    Diverged { iterations: usize, step_norm: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no omega candidate produced a converged run")]
    AllCandidatesFailed,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

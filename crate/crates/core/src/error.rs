use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("step size {name} must be positive, got {value}")]
    NonPositiveStep { name: &'static str, value: f64 },

    #[error("step sizes alpha={alpha}, beta={beta} violate the convergence conditions")]
    InvalidSteps { alpha: f64, beta: f64 },

    #[error("iterate became non-finite at iteration {iteration}")]
    Diverged { iteration: usize },

    #[error("inner solver did not converge in {iterations} iterations (relative residual {residual:e})")]
    InnerSolve { iterations: usize, residual: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty convex set: {0}")]
    EmptySet(String),

    #[error("projector set does not contain the origin")]
    OriginNotInSet,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("parse error: {0}")]
    Parse(String),
}

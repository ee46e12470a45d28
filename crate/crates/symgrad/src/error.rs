//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by laws, quadrature, solvers, and probes.
#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of the operation
    /// (e.g. evaluating a singular power law at zero).
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure failed to reach its tolerance.
    #[error("numerics error: {0}")]
    Numerics(String),

    /// Newton iteration exceeded its step budget. The last iterate is kept
    /// so callers can inspect or restart.
    #[error("solver did not converge after {iterations} steps (residual {residual:.3e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        last_iterate: Vec<f64>,
    },

    /// The linearized system could not be factorized.
    #[error("linear solver error: {0}")]
    LinearSolve(String),

    /// A measurement region contains no quadrature points.
    #[error("degenerate region: {0}")]
    DegenerateRegion(String),

    /// A ratio with vanishing denominator was requested.
    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    /// Invalid configuration value.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

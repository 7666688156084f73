//! Error type shared by all modules.

use alloc::string::String;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Problem data violates a structural invariant: non-positive
    /// coefficient, unordered critical temperatures, shape mismatch.
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature did not converge for {context} on [{lo}, {hi}]")]
    Quadrature { context: String, lo: f64, hi: f64 },

    /// A time step exceeded its iteration budget.
    #[error("time step {step}: no convergence after {iterations} iterations (last sup-difference {last_diff:e})")]
    NonConvergence {
        step: usize,
        iterations: usize,
        last_diff: f64,
    },

    /// Evaluation outside the space-time domain.
    #[error("point (x = {x}, t = {t}) lies outside the domain")]
    OutOfDomain { x: f64, t: f64 },

    /// A documented operation precondition was violated by the caller.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A benchmark or study configuration is unusable.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = core::result::Result<T, Error>;

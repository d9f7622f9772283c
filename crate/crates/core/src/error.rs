//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Argument inside the domain but outside the representable range.
    #[error("range error: {0}")]
    Range(String),

    /// A stated precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A resource guard (path length, memory) tripped.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// NaN or overflow during path simulation.
    #[error("simulation failure at step {step}: {message}")]
    Simulation { step: usize, message: String },

    /// Linear-solve or time-stepping failure.
    #[error("solver error: {0}")]
    Solver(String),

    /// Experiment configuration rejected.
    #[error("config error: {0}")]
    Config(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

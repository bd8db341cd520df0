//! Error type shared by all modules.

use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A scenario or configuration violates a structural invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// The request is well formed but not supported by this evaluation
    /// route (e.g. a non-integer signal shape in the closed form).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The closed-form expansion would exceed the term budget.
    #[error("term budget exceeded: {0}")]
    TermBudget(String),

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    /// A scenario document failed to parse or validate.
    #[error("scenario parse error: {0}")]
    Parse(String),

    /// Underlying I/O failure, with the offending path.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

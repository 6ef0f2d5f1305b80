//! Error type shared by every module of the crate.

/// Errors produced by kernel evaluation, quadrature construction and
/// transform application.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested formula
    /// (evaluation outside the disk of convergence, non-positive Gamma
    /// argument, pole of order larger than the space admits, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A series did not satisfy its stopping rule within the term budget.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// A basis index below the minimal admissible index of the space.
    #[error("index {index} below the minimal index {min} of the space")]
    IndexRange { index: i64, min: i64 },

    /// The quadrature node solver failed to produce a valid rule.
    #[error("quadrature construction failed: {0}")]
    Construction(String),

    /// A subspace vector with the wrong parity for the requested transform.
    #[error("parity mismatch: {0}")]
    Parity(String),

    /// A feature outside the implemented parameter range (e.g. Hardy norms
    /// for exponents other than 2).
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

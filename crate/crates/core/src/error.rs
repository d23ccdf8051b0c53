use thiserror::Error;

/// Errors raised by the field, geometry and potential routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested log-scale exceeds the double-precision budget for angle reduction.
    #[error("precision budget exceeded: {0}")]
    Precision(String),

    /// An experiment parameter is outside its validated range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Continuation along the base curve failed to close.
    #[error("curve tracing failed: {0}")]
    Tracing(String),

    /// Excess against the empty set.
    #[error("excess of a nonempty set against the empty set is undefined")]
    EmptyTarget,

    /// Requested resolution is not reachable; `k_max` is the largest feasible index.
    #[error("resolution budget exceeded: largest feasible k is {k_max}")]
    Resolution { k_max: i64 },

    /// A triangulation degenerated (zero-area or non-finite elements).
    #[error("degenerate triangulation: {0}")]
    Degenerate(String),

    /// Conjugate gradients did not reach the tolerance.
    #[error("no convergence after {iterations} iterations (relative residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// The assembled operator is not positive definite.
    #[error("indefinite system: p^T A p = {0:e}")]
    Indefinite(f64),

    /// A gradient-ratio sample point is not next to the interface.
    #[error("sample point is not adjacent to the interface: {0}")]
    NotOnInterface(String),
}

pub type Result<T> = std::result::Result<T, Error>;

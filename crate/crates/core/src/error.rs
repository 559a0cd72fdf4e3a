//! Error type shared by the numerical kernels.

use thiserror::Error;

/// Failure modes of the numerical operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },
    /// An iteration or series did not reach its tolerance before the cap.
    #[error("{function} did not converge after {iterations} iterations (last residual {residual:e})")]
    NonConvergence {
        function: &'static str,
        iterations: usize,
        residual: f64,
    },
    /// A waveguide or resonator geometry that the conformal mapping cannot handle.
    #[error("invalid geometry: {0}")]
    Geometry(String),
    /// A physical parameter violates its invariant.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// A linear system could not be solved.
    #[error("singular linear system: {0}")]
    Singular(String),
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }
}

/// Result alias for the numerical kernels.
pub type Result<T> = std::result::Result<T, Error>;

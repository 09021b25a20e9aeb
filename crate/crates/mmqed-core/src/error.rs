//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by solvers, assemblers and observable evaluation.
#[derive(Debug, Error)]
pub enum Error {
    /// Input contained NaN or infinity where a finite value is required.
    #[error("non-finite input in {context}")]
    NonFinite { context: &'static str },

    /// A structurally invalid argument (wrong length, empty list, bad range).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two operands refer to incompatible grids or dimensions.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Requested coupled-space dimension exceeds the configured ceiling.
    #[error("coupled dimension {requested} exceeds the configured maximum {max}")]
    DimensionOverflow { requested: usize, max: usize },

    /// An iterative eigensolver ran out of restart cycles.
    #[error("eigensolver did not converge: {locked} of {wanted} pairs after {cycles} cycles")]
    NoConvergence {
        wanted: usize,
        locked: usize,
        cycles: usize,
    },

    /// The independent evaluation routes of the coupling constant disagree.
    #[error(
        "coupling-constant routes disagree beyond 1e-12 relative: \
         eigenmode {eigenmode:e}, closed-form {closed_form:e}, determinant {determinant:e}"
    )]
    RouteDisagreement {
        eigenmode: f64,
        closed_form: f64,
        determinant: f64,
    },

    /// The one-time velocity-gauge displacement calibration failed.
    #[error("velocity-gauge occupation calibration failed: {0}")]
    Calibration(String),

    /// A nonlinear fit did not reach its target.
    #[error("fit failed: {0}")]
    FitFailure(String),

    /// Error bubbled up from the dense linear-algebra backend.
    #[error("linear-algebra backend: {0}")]
    Backend(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

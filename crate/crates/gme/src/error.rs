//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by lattice, state, invariant and signal operations.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Text or JSON input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// Tensor or matrix dimensions do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A state failed the unit-norm contract. States are rejected, never
    /// silently renormalized; call an explicit renormalization first.
    #[error("state is not normalized: |norm^2 - 1| = {deviation:.3e} exceeds tolerance {tolerance:.1e}")]
    NotNormalized {
        /// Measured deviation of the squared norm from one.
        deviation: f64,
        /// Tolerance the deviation was compared against.
        tolerance: f64,
    },

    /// A numerical contract was violated (non-Hermitian input, negative
    /// eigenvalue beyond the floor, non-positive replica invariant, ...).
    #[error("numerical contract violated: {0}")]
    Numerical(String),

    /// A direct tensor contraction would exceed the configured term budget.
    #[error(
        "contraction budget exceeded: {terms} terms > budget {budget} \
         (set GME_MAX_TENSOR_TERMS to raise it)"
    )]
    BudgetExceeded {
        /// Number of terms the contraction would visit.
        terms: u128,
        /// Configured budget.
        budget: u128,
    },

    /// Exact integer arithmetic overflowed a fixed-width type.
    #[error("integer overflow in exact arithmetic: {0}")]
    Overflow(String),

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Underlying JSON failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

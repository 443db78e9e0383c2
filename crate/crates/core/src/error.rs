//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by validation, solvers and evaluators.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Two states (or sets of states) have different dimensions.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A parameter is outside its admissible range.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A time step lies outside the window [1, T].
    #[error("time step {step} outside window [1, {window}]")]
    OutOfWindow { step: usize, window: usize },

    /// A trajectory or trajectory set violates its invariants.
    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),

    /// A numeric input is NaN or infinite.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// A problem exceeds a combinatorial size guard.
    #[error("problem size {size} exceeds bound {bound}: {hint}")]
    SizeLimit {
        size: usize,
        bound: usize,
        hint: &'static str,
    },

    /// A structured input (assignment vector, assignment matrix, batch) is malformed.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An operation that requires a symmetric base distance received an asymmetric one.
    #[error("operation requires a symmetric base distance")]
    AsymmetricBase,

    /// An internal solver invariant failed; indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parameter(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Scenario parameters violate a structural constraint (d < 2, biased
    /// state with d < 3, fewer than two observers, zero bases, ...).
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// An index or parameter fell outside its documented range.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// Two tensors that should be dot-compatible are not.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Exhaustive search was requested for a model space above the cap.
    /// Carries the exact count so callers can report it: d^(L*N) models.
    #[error(
        "exhaustive search infeasible: {models} deterministic models exceed cap {cap}; \
         use alternating ascent instead"
    )]
    ExhaustiveInfeasible { models: u128, cap: u128 },

    /// A dense oracle object would exceed the supported Hilbert-space size.
    #[error("dense oracle limit exceeded: d^N = {size} > {max}")]
    OracleTooLarge { size: u128, max: u128 },
}

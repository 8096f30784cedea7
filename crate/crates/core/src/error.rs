//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by constructors, contracts and numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A value failed a structural invariant (normalization, Hermiticity,
    /// trace, positivity).
    #[error("invariant violation: {0}")]
    Invariant(String),

    /// An internally produced value broke an invariant it is guaranteed to
    /// satisfy; indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),

    /// A numerical routine could not complete (singular system, no
    /// convergence).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The teleportation-circuit search exhausted its candidate set.
    #[error("circuit search failed: {0}")]
    CircuitSearch(String),

    /// A root bracket does not straddle a sign change.
    #[error("no sign change on bracket ({lo}, {hi})")]
    NoSignChange { lo: f64, hi: f64 },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

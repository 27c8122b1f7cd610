//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by evaluation, sampling, estimation and solving.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violated a documented domain constraint.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series or iteration failed to reach the requested accuracy.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// A bracketing root-finder was given an interval without a sign change.
    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    /// An iteration budget was exhausted before convergence.
    #[error("iteration budget exhausted after {0} iterations")]
    Budget(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn convergence(msg: impl Into<String>) -> Self {
        Error::Convergence(msg.into())
    }
}

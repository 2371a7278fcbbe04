//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by the numerical operations in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A gamma-function argument landed on (or within the guard band of)
    /// a pole at a non-positive integer.
    #[error("gamma pole at or near x = {argument}")]
    Pole { argument: f64 },

    /// A point lies outside the region on which the requested map or
    /// formula is defined.
    #[error("point outside admissible region: {reason}")]
    Domain { reason: String },

    /// Two points that must be distinct coincide (kernel evaluation at a
    /// double pole).
    #[error("coincident arguments (separation {separation:e})")]
    Coincidence { separation: f64 },

    /// An index or degree is outside the range the formula covers.
    #[error("index out of range: {reason}")]
    Range { reason: String },

    /// An adaptive quadrature failed to settle within its refinement budget.
    #[error("quadrature did not converge: last relative change {last_change:e}")]
    Convergence { last_change: f64 },

    /// Cholesky factorization hit a non-positive pivot. The Gram matrix of
    /// monomials is severely ill-conditioned; raise `precision_bits`.
    #[error("Gram matrix not positive definite at pivot {pivot} (raise precision_bits)")]
    NotPositiveDefinite { pivot: usize },

    /// A basis vector collapsed during orthogonalization.
    #[error("rank deficiency at step {step}: norm ratio {ratio:e}")]
    RankDeficiency { step: usize, ratio: f64 },

    /// The simultaneous root iteration exhausted its sweep budget.
    #[error("root finding did not converge: worst residual {worst_residual:e}")]
    NoConvergence { worst_residual: f64 },

    /// Input data unusable for the requested statistic.
    #[error("degenerate input: {reason}")]
    DegenerateInput { reason: String },

    /// Malformed argument (degree, length, or parameter out of contract).
    #[error("invalid input: {reason}")]
    InvalidInput { reason: String },
}

impl Error {
    pub(crate) fn domain(reason: impl Into<String>) -> Self {
        Error::Domain { reason: reason.into() }
    }

    pub(crate) fn range(reason: impl Into<String>) -> Self {
        Error::Range { reason: reason.into() }
    }

    pub(crate) fn invalid(reason: impl Into<String>) -> Self {
        Error::InvalidInput { reason: reason.into() }
    }

    pub(crate) fn degenerate(reason: impl Into<String>) -> Self {
        Error::DegenerateInput { reason: reason.into() }
    }

    /// Stable machine-readable name, used by the CLI error JSON.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Pole { .. } => "PoleError",
            Error::Domain { .. } => "DomainError",
            Error::Coincidence { .. } => "CoincidenceError",
            Error::Range { .. } => "RangeError",
            Error::Convergence { .. } => "ConvergenceError",
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::RankDeficiency { .. } => "RankDeficiency",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::DegenerateInput { .. } => "DegenerateInput",
            Error::InvalidInput { .. } => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

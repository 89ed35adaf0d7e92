//! Error types shared by every module of the crate.

use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    /// An input violated a mathematical precondition (non-positive length,
    /// index zero, position outside the trap, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A truncated basis left too much probability mass unaccounted for.
    #[error(
        "truncation deficit {deficit:.3e} exceeds tolerance {tolerance:.1e}; \
         retry with n_max >= {suggested}"
    )]
    Truncation {
        deficit: f64,
        tolerance: f64,
        suggested: usize,
    },

    /// A density matrix eigenvalue fell below the negativity tolerance.
    #[error("positivity violation: eigenvalue {0:.3e} below -1e-8")]
    Positivity(f64),

    /// An invalid run configuration (step-size guard, malformed grids, ...).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Numerical integration produced an unacceptable drift.
    #[error("integration failure: {0}")]
    Integration(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;

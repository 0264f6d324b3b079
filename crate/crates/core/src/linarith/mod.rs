//! Exact feasibility of linear systems mixing `>=`, `>` and `=`.
//!
//! [`feasible`] is a two-phase simplex; [`feasible_by_elimination`] is an
//! independent Fourier–Motzkin oracle used for cross-checking.

mod elimination;
mod simplex;
mod system;

pub use elimination::{feasible_by_elimination, MAX_ELIMINATION_VARS};
pub use system::{Cmp, Constraint, FeasibilityResult, LinearConstraintSystem};

/// Default pivot budget for [`feasible`].
pub const DEFAULT_PIVOT_LIMIT: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinarithError {
    #[error("constraint has {found} coefficients but the system has {expected} variables")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{what} exceeded the limit of {limit}")]
    ResourceLimit { what: &'static str, limit: usize },
    #[error("{count} variables exceed the elimination limit of {max}")]
    TooManyVariables { count: usize, max: usize },
    #[error("cannot parse constraint line `{0}`")]
    Parse(String),
    #[error("internal solver error: {0}")]
    Internal(String),
}

/// Decides feasibility with the default pivot budget.
pub fn feasible(sys: &LinearConstraintSystem) -> Result<FeasibilityResult, LinarithError> {
    simplex::feasible(sys, DEFAULT_PIVOT_LIMIT)
}

/// Decides feasibility with an explicit pivot budget.
pub fn feasible_with_limit(
    sys: &LinearConstraintSystem,
    pivot_limit: usize,
) -> Result<FeasibilityResult, LinarithError> {
    simplex::feasible(sys, pivot_limit)
}

//! Convergence-curve fitting and cross-repetition aggregation.

mod aggregate;
mod fit;

pub use aggregate::{aggregate, aggregate_by, mean_stderr, AggregateCurve};
pub use fit::{fit_stretched_exponential, FitResult, GAMMA_MAX, MIN_FIT_POINTS};

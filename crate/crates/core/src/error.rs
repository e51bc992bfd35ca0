//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by solvers and linear-algebra primitives.
#[derive(Debug, Error)]
pub enum OptError {
    /// Malformed input: wrong dimensions, non-finite entries, bad parameters.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An operator has an eigenvalue inside the zero band and cannot be
    /// inverted or sign-split.
    #[error("singular operator: min |eigenvalue| = {min_abs_eigenvalue:.3e} within tolerance {tolerance:.3e}")]
    SingularOperator {
        min_abs_eigenvalue: f64,
        tolerance: f64,
    },

    /// No step size on the geometric grid satisfied the sufficient-decrease
    /// condition within the trial budget. Usually a broken gradient callback
    /// or an overly aggressive `alpha`.
    #[error("line search failed after {max_trials} trials")]
    LineSearchFailure { max_trials: usize },

    /// Every shift in the configured list left the operator singular.
    #[error("all {count} shift values left the operator singular")]
    ShiftExhaustion { count: usize },

    /// A retraction was asked to move farther than its radius allows.
    /// Callers are expected to clamp steps before retracting.
    #[error("step of norm {step_norm:.3e} reaches outside the retraction radius {radius:.3e}")]
    StepTooLong { step_norm: f64, radius: f64 },

    /// The objective does not expose a Hessian but the operation needs one.
    #[error("objective does not provide a Hessian")]
    MissingHessian,

    /// The objective does not carry local radius/Lipschitz data but the
    /// operation needs it.
    #[error("objective does not provide local radius/Lipschitz data")]
    MissingLocalData,

    /// An internal consistency check failed (e.g. an assembled operator came
    /// out asymmetric beyond tolerance).
    #[error("internal consistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, OptError>;

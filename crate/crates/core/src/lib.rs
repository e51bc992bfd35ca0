//! Backtracking gradient descent and the New Q-Newton method family on
//! Euclidean space and the unit sphere.
//!
//! The crate is organized around five pieces:
//!
//! * [`spectral`] — dense symmetric eigendecomposition, signed spectral
//!   projections, the spectral absolute value, shifted solves;
//! * [`manifold`] — Euclidean space and the unit sphere behind a strong
//!   local retraction interface (two sphere retractions, radius `π`);
//! * [`objective`] — the cost-function trait plus built-in objectives:
//!   sphere quadratics `⟨Ax,x⟩/2`, saddle test functions, a 1D Poisson
//!   energy;
//! * [`firstorder`] — Armijo backtracking gradient descent and its
//!   local-Lipschitz variant, with iteration traces;
//! * [`secondorder`] — New Q-Newton's method (plain, backtracked,
//!   simplified, manifold form) and Newton baselines;
//! * [`classify`] — critical-point labels from the tangent Hessian
//!   spectrum.
//!
//! The sphere solvers make an eigenvector solver out of a quadratic: the
//! minimum of `⟨Ax,x⟩/2` over the unit sphere is `λ_min(A)/2`, attained at
//! the corresponding eigenvector.

pub mod classify;
pub mod error;
pub mod firstorder;
pub mod manifold;
pub mod objective;
pub mod secondorder;
pub mod spectral;

pub use classify::{classify, CriticalPointLabel, CriticalPointReport, DEFAULT_EIG_TOL};
pub use error::{OptError, Result};
pub use firstorder::{
    armijo_step_size, local_step_size, run_gd, BacktrackingConfig, FirstOrderMethod,
    IterationTrace, StopCriteria, StopReason, TraceRecord, MAX_BACKTRACKS,
};
pub use manifold::{Manifold, Point, RetractionKind, TangentVector};
pub use objective::{
    estimate_local_lipschitz, make_poisson_1d, make_quadratic_sphere, make_test_saddle,
    read_matrix, LipschitzEstimate, Objective, PoissonFunctional, QuadraticSphereCost, SaddleKind,
    Sign, TestSaddle,
};
pub use secondorder::{
    bnqn_step, nqn_direction, nqn_step, riemannian_nqn_step, run_second_order,
    simplified_bnqn_step, GammaSchedule, InvertibilityMode, NqnConfig, SecondOrderConfig,
    SecondOrderMethod, SimplifiedBnqnConfig,
};
pub use spectral::{SpectralDecomposition, SymmetricOperator};

//! Critical-point classification from the tangent-restricted Hessian
//! spectrum.

use crate::error::{OptError, Result};
use crate::manifold::{Manifold, Point};
use crate::objective::Objective;

/// Default relative eigenvalue tolerance; the effective band is
/// `eig_tol · (1 + max|λ|)`.
pub const DEFAULT_EIG_TOL: f64 = 1e-6;

/// What the tangent Hessian spectrum says about a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalPointLabel {
    /// All tangent eigenvalues above the band.
    Minimum,
    /// All tangent eigenvalues below the band.
    Maximum,
    /// Eigenvalues on both sides of the band, none inside it.
    Saddle,
    /// Some eigenvalue inside the band.
    Degenerate,
    /// The gradient norm exceeds the tolerance; the spectrum is still
    /// reported but does not classify the point.
    NotCritical,
}

/// Classification report at a point.
#[derive(Debug, Clone)]
pub struct CriticalPointReport {
    pub point: Point,
    pub gradient_norm: f64,
    /// Eigenvalues of the Hessian restricted to the tangent frame,
    /// ascending.
    pub tangent_hessian_eigenvalues: Vec<f64>,
    pub label: CriticalPointLabel,
    /// Set when the point is critical and the tangent Hessian has an
    /// eigenvalue below `-band`, regardless of invertibility. Strictly
    /// weaker than `Saddle`: a degenerate point can still repel.
    pub generalized_saddle: bool,
}

/// Classifies `x` by the spectrum of the Riemannian Hessian in an
/// orthonormal tangent frame.
///
/// `grad_tol` decides criticality; `eig_tol` is relative, with effective
/// band `eig_tol · (1 + max|λ|)`.
pub fn classify(
    obj: &dyn Objective,
    manifold: &Manifold,
    x: &Point,
    grad_tol: f64,
    eig_tol: f64,
) -> Result<CriticalPointReport> {
    let euclid_grad = obj.gradient(x.coords());
    let gradient_norm = manifold.riemannian_gradient(&euclid_grad, x).norm();
    let euclid_hess = obj.hessian(x.coords()).ok_or(OptError::MissingHessian)?;
    let ambient = manifold.riemannian_hessian(&euclid_hess, &euclid_grad, x)?;
    let frame = manifold.tangent_basis(x);
    let tangent = ambient.restrict(&frame);
    let eigenvalues: Vec<f64> = tangent
        .eigendecompose()
        .eigenvalues()
        .iter()
        .copied()
        .collect();

    let max_abs = eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    let band = eig_tol * (1.0 + max_abs);

    let label = if gradient_norm > grad_tol {
        CriticalPointLabel::NotCritical
    } else if eigenvalues.iter().any(|l| l.abs() <= band) {
        CriticalPointLabel::Degenerate
    } else if eigenvalues.iter().all(|l| *l > band) {
        CriticalPointLabel::Minimum
    } else if eigenvalues.iter().all(|l| *l < -band) {
        CriticalPointLabel::Maximum
    } else {
        CriticalPointLabel::Saddle
    };

    let generalized_saddle = label != CriticalPointLabel::NotCritical
        && eigenvalues.first().is_some_and(|l| *l < -band);

    Ok(CriticalPointReport {
        point: x.clone(),
        gradient_norm,
        tangent_hessian_eigenvalues: eigenvalues,
        label,
        generalized_saddle,
    })
}

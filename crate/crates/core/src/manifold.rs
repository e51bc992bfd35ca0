//! Euclidean space and the unit sphere `S^k` behind one retraction-based
//! interface.
//!
//! A manifold here is a strong local retraction: a radius function `r(x)`
//! together with a map `R_x` defined on the tangent ball of that radius,
//! with `R_x(0) = x` and `DR_x(0) = Id`. Euclidean space uses plain vector
//! addition with `r = ∞`. The sphere carries two retractions with `r = π`:
//!
//! * projective: `R_x(v) = (x + v) / √(1 + ‖v‖²)`
//! * geodesic:   `R_x(v) = cos(‖v‖)·x + sin(‖v‖)·v/‖v‖` (the exponential map)
//!
//! Points and tangent vectors store ambient coordinates. Sphere points are
//! renormalized and sphere tangents re-projected on construction, since
//! floating-point drift after a retraction is inevitable.

use nalgebra::{DMatrix, DVector};

use crate::error::{OptError, Result};
use crate::spectral::SymmetricOperator;

/// Which retraction a manifold instance uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RetractionKind {
    Euclidean,
    SphereProjective,
    SphereGeodesic,
}

/// A point on a manifold, stored in ambient coordinates.
///
/// Sphere points have unit norm (enforced on construction to 1e-12 and
/// re-enforced after every retraction).
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: DVector<f64>,
}

impl Point {
    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn into_coords(self) -> DVector<f64> {
        self.coords
    }
}

/// A tangent vector at a base point, in ambient coordinates.
///
/// Sphere tangents are orthogonal to their base point (projected on
/// construction).
#[derive(Debug, Clone)]
pub struct TangentVector {
    base: Point,
    coords: DVector<f64>,
}

impl TangentVector {
    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }

    /// The same tangent vector scaled by `s`.
    pub fn scaled(&self, s: f64) -> TangentVector {
        TangentVector {
            base: self.base.clone(),
            coords: &self.coords * s,
        }
    }
}

/// One of the built-in manifolds: Euclidean space or the unit sphere with a
/// chosen retraction.
#[derive(Debug, Clone)]
pub struct Manifold {
    kind: RetractionKind,
    ambient_dim: usize,
    radius_override: Option<f64>,
}

impl Manifold {
    /// Euclidean space `ℝ^dim` with `R_x(v) = x + v` and infinite radius.
    pub fn euclidean(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(OptError::InvalidInput("dimension must be >= 1".into()));
        }
        Ok(Self {
            kind: RetractionKind::Euclidean,
            ambient_dim: dim,
            radius_override: None,
        })
    }

    /// The unit sphere in `ℝ^ambient_dim` with the projective retraction.
    pub fn sphere_projective(ambient_dim: usize) -> Result<Self> {
        Self::sphere(ambient_dim, RetractionKind::SphereProjective)
    }

    /// The unit sphere in `ℝ^ambient_dim` with the geodesic retraction.
    pub fn sphere_geodesic(ambient_dim: usize) -> Result<Self> {
        Self::sphere(ambient_dim, RetractionKind::SphereGeodesic)
    }

    fn sphere(ambient_dim: usize, kind: RetractionKind) -> Result<Self> {
        if ambient_dim < 2 {
            return Err(OptError::InvalidInput(
                "sphere needs ambient dimension >= 2".into(),
            ));
        }
        Ok(Self {
            kind,
            ambient_dim,
            radius_override: None,
        })
    }

    /// Overrides the retraction radius. The sphere contract is `r = π`, but
    /// the sphere retractions are well defined on the whole tangent space,
    /// and experiments sometimes run them uncapped with `r = ∞`.
    pub fn with_radius_override(mut self, radius: f64) -> Self {
        self.radius_override = Some(radius);
        self
    }

    pub fn kind(&self) -> RetractionKind {
        self.kind
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn intrinsic_dim(&self) -> usize {
        match self.kind {
            RetractionKind::Euclidean => self.ambient_dim,
            _ => self.ambient_dim - 1,
        }
    }

    pub fn is_euclidean(&self) -> bool {
        self.kind == RetractionKind::Euclidean
    }

    /// Wraps ambient coordinates as a point on this manifold. Sphere points
    /// are renormalized to unit length.
    pub fn point(&self, coords: DVector<f64>) -> Result<Point> {
        if coords.len() != self.ambient_dim {
            return Err(OptError::InvalidInput(format!(
                "point has dimension {}, manifold is ambient {}",
                coords.len(),
                self.ambient_dim
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(OptError::InvalidInput("point has non-finite coordinates".into()));
        }
        match self.kind {
            RetractionKind::Euclidean => Ok(Point { coords }),
            _ => {
                let norm = coords.norm();
                if norm == 0.0 {
                    return Err(OptError::InvalidInput(
                        "cannot place the zero vector on the sphere".into(),
                    ));
                }
                Ok(Point {
                    coords: coords / norm,
                })
            }
        }
    }

    /// Wraps ambient coordinates as a tangent vector at `base`. Sphere
    /// tangents are projected onto the tangent plane `v - ⟨v,x⟩x`.
    pub fn tangent(&self, base: &Point, coords: DVector<f64>) -> TangentVector {
        let coords = match self.kind {
            RetractionKind::Euclidean => coords,
            _ => {
                let radial = coords.dot(&base.coords);
                coords - &base.coords * radial
            }
        };
        TangentVector {
            base: base.clone(),
            coords,
        }
    }

    /// The retraction radius `r(x)`: `∞` for Euclidean space, `π` for the
    /// sphere (unless overridden).
    pub fn retraction_radius(&self, _x: &Point) -> f64 {
        if let Some(r) = self.radius_override {
            return r;
        }
        match self.kind {
            RetractionKind::Euclidean => f64::INFINITY,
            _ => std::f64::consts::PI,
        }
    }

    /// Applies the retraction `R_x(v)`.
    ///
    /// `R_x(0) = x` is exact. Steps of norm `>= r(x)` are refused; callers
    /// clamp before retracting.
    pub fn retract(&self, x: &Point, v: &TangentVector) -> Result<Point> {
        let norm = v.coords.norm();
        if norm == 0.0 {
            return Ok(x.clone());
        }
        let radius = self.retraction_radius(x);
        if radius.is_finite() && norm >= radius {
            return Err(OptError::StepTooLong {
                step_norm: norm,
                radius,
            });
        }
        match self.kind {
            RetractionKind::Euclidean => Ok(Point {
                coords: &x.coords + &v.coords,
            }),
            RetractionKind::SphereProjective => {
                let stepped = &x.coords + &v.coords;
                self.point(stepped / (1.0 + norm * norm).sqrt())
            }
            RetractionKind::SphereGeodesic => {
                // Series-safe sinc avoids 0/0 for tiny steps.
                let sinc = if norm < 1e-4 {
                    1.0 - norm * norm / 6.0
                } else {
                    norm.sin() / norm
                };
                let moved = &x.coords * norm.cos() + &v.coords * sinc;
                self.point(moved)
            }
        }
    }

    /// Converts an ambient-space gradient into the Riemannian gradient:
    /// unchanged on Euclidean space, the orthogonal projection
    /// `g - ⟨g,x⟩x` on the sphere.
    pub fn riemannian_gradient(&self, euclid_grad: &DVector<f64>, x: &Point) -> TangentVector {
        self.tangent(x, euclid_grad.clone())
    }

    /// Assembles the symmetric ambient extension of the Riemannian Hessian.
    ///
    /// On the sphere, with `P = Id - xxᵀ` and `c = ⟨∇f(x), x⟩`, the tangent
    /// Hessian acting on tangent `u` is `P ∇²f(x) u - c·u`; precomposing
    /// with `P` extends it to the ambient space as the symmetric operator
    ///
    /// `B = P ∇²f(x) P - c P`,
    ///
    /// which keeps `x` in its kernel. Euclidean space returns the input.
    pub fn riemannian_hessian(
        &self,
        euclid_hess: &SymmetricOperator,
        euclid_grad: &DVector<f64>,
        x: &Point,
    ) -> Result<SymmetricOperator> {
        if euclid_hess.dim() != self.ambient_dim {
            return Err(OptError::InvalidInput(format!(
                "hessian dimension {} does not match ambient {}",
                euclid_hess.dim(),
                self.ambient_dim
            )));
        }
        match self.kind {
            RetractionKind::Euclidean => Ok(euclid_hess.clone()),
            _ => {
                let n = self.ambient_dim;
                let projector =
                    DMatrix::identity(n, n) - &x.coords * x.coords.transpose();
                let radial = euclid_grad.dot(&x.coords);
                let assembled =
                    &projector * euclid_hess.entries() * &projector - &projector * radial;
                let asym = (&assembled - assembled.transpose()).norm();
                if asym > 1e-10 * (1.0 + assembled.norm()) {
                    return Err(OptError::Inconsistent(format!(
                        "tangent Hessian extension asymmetric by {asym:.3e}"
                    )));
                }
                SymmetricOperator::new(assembled)
            }
        }
    }

    /// A deterministic orthonormal basis of the tangent space at `x`, as
    /// the columns of an `ambient × intrinsic` matrix.
    ///
    /// For the sphere this is the Householder completion of `x`: the
    /// reflector sending `e₁` to `∓x` has the remaining columns orthonormal
    /// and orthogonal to `x`. Euclidean space returns the standard basis.
    pub fn tangent_basis(&self, x: &Point) -> DMatrix<f64> {
        match self.kind {
            RetractionKind::Euclidean => DMatrix::identity(self.ambient_dim, self.ambient_dim),
            _ => {
                let n = self.ambient_dim;
                let sign = if x.coords[0] >= 0.0 { 1.0 } else { -1.0 };
                let mut u = x.coords.clone();
                u[0] += sign;
                let scale = 2.0 / u.dot(&u);
                let reflector = DMatrix::identity(n, n) - (&u * u.transpose()) * scale;
                reflector.columns(1, n - 1).into_owned()
            }
        }
    }
}

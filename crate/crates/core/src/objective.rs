//! Cost functions: the trait the solvers drive, plus the built-in
//! objectives (sphere quadratics, saddle test functions, a discretized
//! Poisson energy) and local Lipschitz estimation.

use std::io::BufRead;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{OptError, Result};
use crate::spectral::SymmetricOperator;

/// Default constant local radius `ε₀` used by built-in objectives that
/// carry local Lipschitz data.
pub const DEFAULT_LOCAL_RADIUS: f64 = 1.0;

/// Default padding `γ₀` added to Hessian-norm Lipschitz estimates.
pub const DEFAULT_GAMMA0: f64 = 1e-2;

/// A twice-differentiable cost function on ambient coordinates.
///
/// `value` and `gradient` are mandatory; the Hessian and the local
/// radius/Lipschitz data are optional capabilities. All callbacks must be
/// pure: objectives are shared freely across threads.
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &DVector<f64>) -> f64;

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64>;

    fn hessian(&self, _x: &DVector<f64>) -> Option<SymmetricOperator> {
        None
    }

    /// Radius `r(x)` of a ball on which [`local_lipschitz`](Self::local_lipschitz)
    /// bounds the gradient's Lipschitz constant.
    fn local_radius(&self, _x: &DVector<f64>) -> Option<f64> {
        None
    }

    /// A Lipschitz constant `L(x)` for the gradient on `B(x, r(x))`.
    fn local_lipschitz(&self, _x: &DVector<f64>) -> Option<f64> {
        None
    }

    /// Whether every sublevel set `{f <= c}` is compact. Drives the
    /// conditional step normalization in the New Q-Newton family.
    fn has_compact_sublevels(&self) -> bool {
        false
    }
}

/// Sign attached to a quadratic sphere cost: `Plus` minimizes `⟨Ax,x⟩/2`
/// (smallest eigenvalue), `Minus` minimizes the negation (largest
/// eigenvalue).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// The quadratic form `x ↦ sign · ⟨Ax,x⟩/2` in ambient coordinates.
///
/// Restricted to the unit sphere its minimum is `λ_min(sign·A)/2`, attained
/// at the corresponding eigenvector, which is what makes it an eigenvector
/// solver. The manifold layer converts the ambient gradient `sign·Ax` and
/// Hessian `sign·A` supplied here.
#[derive(Debug, Clone)]
pub struct QuadraticSphereCost {
    matrix: SymmetricOperator,
    sign: Sign,
    lipschitz: f64,
}

/// Builds the quadratic cost `sign·⟨Ax,x⟩/2`.
pub fn make_quadratic_sphere(matrix: SymmetricOperator, sign: Sign) -> QuadraticSphereCost {
    // 2‖A‖ dominates both the ambient Lipschitz constant ‖A‖ of the
    // gradient and the largest Riemannian Hessian norm on the sphere
    // (bounded by the eigenvalue spread of A).
    let lipschitz = 2.0 * matrix.operator_norm() + DEFAULT_GAMMA0;
    QuadraticSphereCost {
        matrix,
        sign,
        lipschitz,
    }
}

impl QuadraticSphereCost {
    pub fn matrix(&self) -> &SymmetricOperator {
        &self.matrix
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }
}

impl Objective for QuadraticSphereCost {
    fn dim(&self) -> usize {
        self.matrix.dim()
    }

    fn value(&self, x: &DVector<f64>) -> f64 {
        self.sign.as_f64() * 0.5 * self.matrix.apply(x).dot(x)
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        self.matrix.apply(x) * self.sign.as_f64()
    }

    fn hessian(&self, _x: &DVector<f64>) -> Option<SymmetricOperator> {
        let mut entries = self.matrix.entries().clone();
        if self.sign == Sign::Minus {
            entries.neg_mut();
        }
        Some(SymmetricOperator::new(entries).expect("scaled symmetric matrix stays valid"))
    }

    fn local_radius(&self, _x: &DVector<f64>) -> Option<f64> {
        Some(f64::INFINITY)
    }

    fn local_lipschitz(&self, _x: &DVector<f64>) -> Option<f64> {
        Some(self.lipschitz)
    }

    fn has_compact_sublevels(&self) -> bool {
        // The intended domain is the (compact) unit sphere.
        true
    }
}

/// The 1D Poisson energy `f(u) = ½ uᵀKu - gᵀu` on `n` interior nodes of a
/// uniform grid over `(0,1)` with zero Dirichlet ends.
///
/// `K = (1/h)·tridiag(-1, 2, -1)` with `h = 1/(n+1)` is the stiffness
/// operator of the second-order central difference scheme, and the load is
/// `g_vec[i] = h·g(node_i)`. The unique critical point solves `Ku = g_vec`,
/// the discrete weak form of `-u'' = g`.
#[derive(Debug, Clone)]
pub struct PoissonFunctional {
    n: usize,
    h: f64,
    stiffness: SymmetricOperator,
    load: DVector<f64>,
    lipschitz: f64,
}

/// Discretizes the Poisson energy for source `g` on `n >= 1` interior nodes.
pub fn make_poisson_1d<F: Fn(f64) -> f64>(n: usize, g: F) -> Result<PoissonFunctional> {
    if n == 0 {
        return Err(OptError::InvalidInput(
            "poisson discretization needs at least one interior node".into(),
        ));
    }
    let h = 1.0 / (n as f64 + 1.0);
    let mut entries = DMatrix::zeros(n, n);
    for i in 0..n {
        entries[(i, i)] = 2.0 / h;
        if i + 1 < n {
            entries[(i, i + 1)] = -1.0 / h;
            entries[(i + 1, i)] = -1.0 / h;
        }
    }
    let stiffness = SymmetricOperator::new(entries)?;
    let load = DVector::from_fn(n, |i, _| h * g((i as f64 + 1.0) * h));
    if load.iter().any(|v| !v.is_finite()) {
        return Err(OptError::InvalidInput("source produced non-finite load".into()));
    }
    let lipschitz = stiffness.eigendecompose().eigenvalues()[n - 1];
    Ok(PoissonFunctional {
        n,
        h,
        stiffness,
        load,
        lipschitz,
    })
}

impl PoissonFunctional {
    pub fn interior_nodes(&self) -> usize {
        self.n
    }

    pub fn grid_spacing(&self) -> f64 {
        self.h
    }

    pub fn stiffness(&self) -> &SymmetricOperator {
        &self.stiffness
    }

    pub fn load(&self) -> &DVector<f64> {
        &self.load
    }
}

impl Objective for PoissonFunctional {
    fn dim(&self) -> usize {
        self.n
    }

    fn value(&self, u: &DVector<f64>) -> f64 {
        0.5 * self.stiffness.apply(u).dot(u) - self.load.dot(u)
    }

    fn gradient(&self, u: &DVector<f64>) -> DVector<f64> {
        self.stiffness.apply(u) - &self.load
    }

    fn hessian(&self, _u: &DVector<f64>) -> Option<SymmetricOperator> {
        Some(self.stiffness.clone())
    }

    fn local_radius(&self, _u: &DVector<f64>) -> Option<f64> {
        Some(f64::INFINITY)
    }

    fn local_lipschitz(&self, _u: &DVector<f64>) -> Option<f64> {
        Some(self.lipschitz)
    }

    fn has_compact_sublevels(&self) -> bool {
        // K is positive definite, so f is coercive.
        true
    }
}

/// The two standard saddle test functions on ℝ².
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaddleKind {
    /// `f(x,y) = (x² - y²)/2`: the origin is a nondegenerate saddle.
    QuadraticSaddle,
    /// `f(x,y) = x³ - 3xy²`: the origin is a degenerate critical point
    /// with vanishing Hessian.
    MonkeySaddle,
}

/// A saddle test objective with analytic derivatives.
#[derive(Debug, Clone, Copy)]
pub struct TestSaddle {
    kind: SaddleKind,
}

pub fn make_test_saddle(kind: SaddleKind) -> TestSaddle {
    TestSaddle { kind }
}

impl TestSaddle {
    pub fn kind(&self) -> SaddleKind {
        self.kind
    }
}

impl Objective for TestSaddle {
    fn dim(&self) -> usize {
        2
    }

    fn value(&self, p: &DVector<f64>) -> f64 {
        let (x, y) = (p[0], p[1]);
        match self.kind {
            SaddleKind::QuadraticSaddle => 0.5 * (x * x - y * y),
            SaddleKind::MonkeySaddle => x * x * x - 3.0 * x * y * y,
        }
    }

    fn gradient(&self, p: &DVector<f64>) -> DVector<f64> {
        let (x, y) = (p[0], p[1]);
        match self.kind {
            SaddleKind::QuadraticSaddle => DVector::from_row_slice(&[x, -y]),
            SaddleKind::MonkeySaddle => {
                DVector::from_row_slice(&[3.0 * (x * x - y * y), -6.0 * x * y])
            }
        }
    }

    fn hessian(&self, p: &DVector<f64>) -> Option<SymmetricOperator> {
        let (x, y) = (p[0], p[1]);
        let entries = match self.kind {
            SaddleKind::QuadraticSaddle => DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]),
            SaddleKind::MonkeySaddle => {
                DMatrix::from_row_slice(2, 2, &[6.0 * x, -6.0 * y, -6.0 * y, -6.0 * x])
            }
        };
        Some(SymmetricOperator::new(entries).expect("finite saddle Hessian"))
    }

    fn local_radius(&self, _p: &DVector<f64>) -> Option<f64> {
        Some(DEFAULT_LOCAL_RADIUS)
    }

    fn local_lipschitz(&self, p: &DVector<f64>) -> Option<f64> {
        match self.kind {
            SaddleKind::QuadraticSaddle => Some(1.0 + DEFAULT_GAMMA0),
            // ‖∇²f(z)‖ = 6‖z‖, maximized over B(p, r) at 6(‖p‖ + r).
            SaddleKind::MonkeySaddle => {
                Some(6.0 * (p.norm() + DEFAULT_LOCAL_RADIUS) + DEFAULT_GAMMA0)
            }
        }
    }
}

/// How [`estimate_local_lipschitz`] derives its bound.
#[derive(Debug, Clone)]
pub enum LipschitzEstimate {
    /// `‖∇²f(x)‖ + γ₀`, the operator norm of the Hessian at the point
    /// itself plus a safety pad.
    HessianNorm { gamma0: f64 },
    /// The largest gradient difference quotient over seeded random pairs in
    /// `B(x, radius)`, inflated by 1.1.
    SampledQuotient {
        radius: f64,
        samples: usize,
        seed: u64,
    },
}

/// Estimates a local Lipschitz constant for `∇f` near `x`.
pub fn estimate_local_lipschitz(
    obj: &dyn Objective,
    x: &DVector<f64>,
    mode: &LipschitzEstimate,
) -> Result<f64> {
    match mode {
        LipschitzEstimate::HessianNorm { gamma0 } => {
            let hess = obj.hessian(x).ok_or(OptError::MissingHessian)?;
            Ok(hess.operator_norm() + gamma0)
        }
        LipschitzEstimate::SampledQuotient {
            radius,
            samples,
            seed,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let dim = obj.dim();
            // Per-coordinate range of the cube inscribed in B(x, radius).
            let half = radius / (dim as f64).sqrt();
            let draw = |rng: &mut ChaCha8Rng| {
                let mut p = x.clone();
                for c in p.iter_mut() {
                    *c += rng.random_range(-half..=half);
                }
                p
            };
            let mut best: f64 = 0.0;
            for _ in 0..*samples {
                let y = draw(&mut rng);
                let z = draw(&mut rng);
                let gap = (&y - &z).norm();
                if gap == 0.0 {
                    continue;
                }
                let quotient = (obj.gradient(&y) - obj.gradient(&z)).norm() / gap;
                best = best.max(quotient);
            }
            Ok(best * 1.1)
        }
    }
}

/// Reads a matrix in the plain-text exchange format: the dimension first,
/// then `dim` rows of `dim` whitespace-separated reals. The result is
/// symmetrized like every [`SymmetricOperator`].
pub fn read_matrix<R: BufRead>(reader: R) -> Result<SymmetricOperator> {
    let mut tokens = Vec::new();
    for line in reader.lines() {
        let line = line.map_err(|e| OptError::InvalidInput(format!("matrix read failed: {e}")))?;
        tokens.extend(line.split_whitespace().map(str::to_owned));
    }
    let mut it = tokens.iter();
    let dim: usize = it
        .next()
        .ok_or_else(|| OptError::InvalidInput("empty matrix file".into()))?
        .parse()
        .map_err(|_| OptError::InvalidInput("first token must be the dimension".into()))?;
    if dim == 0 {
        return Err(OptError::InvalidInput("matrix dimension must be >= 1".into()));
    }
    let mut values = Vec::with_capacity(dim * dim);
    for token in it {
        let v: f64 = token
            .parse()
            .map_err(|_| OptError::InvalidInput(format!("bad matrix entry {token:?}")))?;
        values.push(v);
    }
    if values.len() != dim * dim {
        return Err(OptError::InvalidInput(format!(
            "expected {} entries for a {dim}x{dim} matrix, got {}",
            dim * dim,
            values.len()
        )));
    }
    SymmetricOperator::new(DMatrix::from_row_slice(dim, dim, &values))
}

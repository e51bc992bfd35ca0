//! The New Q-Newton family and the Newton baselines.
//!
//! The core update shifts the Hessian to `A = ∇²f(x) + δ_j‖∇f(x)‖^e·Id`,
//! walking a fixed list of shift values until `A` is invertible, solves
//! `A v = ∇f(x)`, and then flips the sign of the component of `v` lying in
//! the negative eigenspace of `A`:
//!
//! `w = pr_{A,+}(v) - pr_{A,-}(v)`.
//!
//! The flip makes `⟨w, ∇f(x)⟩ >= 0` (so `-w` is never an ascent direction)
//! and turns saddle points into repellers while leaving the Newton step
//! untouched near nondegenerate minima. Variants differ in how they damp
//! `w`:
//!
//! * plain: `x - w`, normalized to unit length when the objective lacks
//!   compact sublevels;
//! * backtracking: `x - γw` with `γ` from an Armijo search on `⟨w, ∇f⟩`;
//! * simplified: replaces `∇²f` by its spectral absolute value plus a fixed
//!   shift (always positive definite) and halves `γ` from 1;
//! * manifold form: works in an orthonormal tangent frame and clamps the
//!   step by `λ = 1/γ_{j+1}` from a growth schedule so it stays inside half
//!   the retraction radius.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use crate::error::{OptError, Result};
use crate::firstorder::{
    BacktrackingConfig, IterationTrace, StopCriteria, StopReason, TraceRecord,
    MAX_BACKTRACKS, VALUE_DIVERGENCE_FLOOR,
};
use crate::manifold::{Manifold, Point};
use crate::objective::Objective;
use crate::spectral::SymmetricOperator;

/// How shifted operators are tested before being accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InvertibilityMode {
    /// Spectral form of the determinant test: no eigenvalue inside the zero
    /// band.
    DetOnly,
    /// Additionally require every eigenvalue magnitude to clear
    /// `‖∇f‖^e · min_{i≠j}|δ_i - δ_j| / 2`; by the pigeonhole principle some
    /// shift in a list of `dim+1` distinct values always passes.
    #[default]
    EigenvalueFloor,
}

/// Configuration of the shifted-Hessian direction.
#[derive(Debug, Clone)]
pub struct NqnConfig {
    /// Pairwise distinct shift coefficients `δ_0, …, δ_k`, tried in order.
    pub deltas: Vec<f64>,
    /// The literal exponent `e > 1` in the shift magnitude `‖∇f‖^e`.
    pub exponent: f64,
    pub invertibility: InvertibilityMode,
    /// Whether to normalize `w ← w / max(1, ‖w‖)`; mirrors the objective
    /// lacking compact sublevels.
    pub normalize_step: bool,
}

impl NqnConfig {
    pub fn new(
        deltas: Vec<f64>,
        exponent: f64,
        invertibility: InvertibilityMode,
        normalize_step: bool,
    ) -> Result<Self> {
        if deltas.is_empty() {
            return Err(OptError::InvalidInput("need at least one shift value".into()));
        }
        if deltas.iter().any(|d| !d.is_finite()) {
            return Err(OptError::InvalidInput("shift values must be finite".into()));
        }
        for (i, a) in deltas.iter().enumerate() {
            for b in &deltas[i + 1..] {
                if a == b {
                    return Err(OptError::InvalidInput(format!(
                        "shift values must be pairwise distinct, {a} repeats"
                    )));
                }
            }
        }
        if exponent.is_nan() || exponent <= 1.0 {
            return Err(OptError::InvalidInput(format!(
                "exponent must exceed 1, got {exponent}"
            )));
        }
        Ok(Self {
            deltas,
            exponent,
            invertibility,
            normalize_step,
        })
    }

    /// Deterministic default shifts for an `intrinsic_dim`-dimensional
    /// problem: `δ_0 = 0` followed by `intrinsic_dim` seeded uniform draws
    /// from `[-0.01, 0.01]`, resampled to keep pairwise gaps >= 1e-4.
    ///
    /// `δ_0 = 0` makes the generic step an undamped (sign-flipped) Newton
    /// step; the small nonzero shifts only engage when the Hessian itself
    /// fails the invertibility test.
    pub fn seeded(intrinsic_dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut deltas: Vec<f64> = vec![0.0];
        while deltas.len() < intrinsic_dim + 1 {
            let cand: f64 = rng.random_range(-0.01..=0.01);
            if deltas.iter().all(|d| (cand - d).abs() >= 1e-4) {
                deltas.push(cand);
            }
        }
        Self {
            deltas,
            exponent: 2.0,
            invertibility: InvertibilityMode::default(),
            normalize_step: false,
        }
    }

    /// Seeded defaults sized for `obj` on Euclidean space, normalizing
    /// exactly when the objective lacks compact sublevels.
    pub fn for_objective(obj: &dyn Objective, seed: u64) -> Self {
        let mut cfg = Self::seeded(obj.dim(), seed);
        cfg.normalize_step = !obj.has_compact_sublevels();
        cfg
    }

    pub fn with_normalization(mut self, on: bool) -> Self {
        self.normalize_step = on;
        self
    }

    pub fn with_invertibility(mut self, mode: InvertibilityMode) -> Self {
        self.invertibility = mode;
        self
    }

    /// Smallest pairwise gap of the shift list (zero for a single shift,
    /// which degrades the floor mode to the determinant test).
    fn min_gap(&self) -> f64 {
        let mut gap = f64::INFINITY;
        for (i, a) in self.deltas.iter().enumerate() {
            for b in &self.deltas[i + 1..] {
                gap = gap.min((a - b).abs());
            }
        }
        if gap.is_finite() {
            gap
        } else {
            0.0
        }
    }

    fn floor_for(&self, shift_scale: f64) -> f64 {
        match self.invertibility {
            InvertibilityMode::DetOnly => 0.0,
            InvertibilityMode::EigenvalueFloor => 0.5 * shift_scale * self.min_gap(),
        }
    }
}

/// The step-damping schedule `γ_0 = 0 < γ_1 = 1 < γ_2 < … → ∞` used by the
/// manifold form to clamp steps inside half the retraction radius. The
/// ratio `γ_j/γ_{j+1}` must stay at or above 0.4 so consecutive clamps
/// cannot collapse the step.
#[derive(Clone)]
pub struct GammaSchedule {
    gamma: Arc<dyn Fn(usize) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for GammaSchedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GammaSchedule(0, 1, {}, {}, …)", (self.gamma)(2), (self.gamma)(3))
    }
}

impl GammaSchedule {
    /// The default schedule `γ_j = 2^{j-1}` for `j >= 1` (ratio 1/2).
    pub fn doubling() -> Self {
        Self {
            gamma: Arc::new(|j| if j == 0 { 0.0 } else { 2.0_f64.powi(j as i32 - 1) }),
        }
    }

    /// A custom schedule; the constraints (`γ_0 = 0`, `γ_1 = 1`, strictly
    /// increasing, ratio >= 0.4) are spot-checked on the first 64 terms.
    pub fn custom<F>(gamma: F) -> Result<Self>
    where
        F: Fn(usize) -> f64 + Send + Sync + 'static,
    {
        if gamma(0) != 0.0 || gamma(1) != 1.0 {
            return Err(OptError::InvalidInput(
                "schedule must start gamma_0 = 0, gamma_1 = 1".into(),
            ));
        }
        for j in 1..64 {
            let (a, b) = (gamma(j), gamma(j + 1));
            if a.is_nan() || b.is_nan() || b <= a {
                return Err(OptError::InvalidInput(format!(
                    "schedule must increase strictly, gamma_{j} = {a}, gamma_{} = {b}",
                    j + 1
                )));
            }
            if a / b < 0.4 {
                return Err(OptError::InvalidInput(format!(
                    "schedule ratio gamma_{j}/gamma_{} = {:.3} below 0.4",
                    j + 1,
                    a / b
                )));
            }
        }
        Ok(Self {
            gamma: Arc::new(gamma),
        })
    }

    pub fn gamma(&self, j: usize) -> f64 {
        (self.gamma)(j)
    }

    /// The damping factor `λ = 1/γ_{j+1}` for the cell
    /// `γ_j·r/2 <= ‖v‖ < γ_{j+1}·r/2` containing the undamped step norm.
    /// Guarantees `λ‖v‖ < r/2`.
    pub fn clamp_factor(&self, step_norm: f64, radius: f64) -> f64 {
        let half = 0.5 * radius;
        let mut j = 0;
        while step_norm >= self.gamma(j + 1) * half {
            j += 1;
        }
        1.0 / self.gamma(j + 1)
    }
}

impl Default for GammaSchedule {
    fn default() -> Self {
        Self::doubling()
    }
}

/// Configuration of the simplified variant: `A = Abs(∇²f) + δ‖∇f‖^e·Id`
/// with the Armijo coefficient hard-wired to 1/3 and halving to 1/2.
#[derive(Debug, Clone, Copy)]
pub struct SimplifiedBnqnConfig {
    pub delta: f64,
    /// The literal exponent `e = 1 + α`.
    pub exponent: f64,
    pub max_halvings: usize,
}

impl SimplifiedBnqnConfig {
    pub fn new(delta: f64, exponent: f64, max_halvings: usize) -> Result<Self> {
        if !delta.is_finite() || delta <= 0.0 {
            return Err(OptError::InvalidInput(format!("delta must be positive, got {delta}")));
        }
        Ok(Self {
            delta,
            exponent,
            max_halvings,
        })
    }
}

impl Default for SimplifiedBnqnConfig {
    fn default() -> Self {
        Self {
            delta: 1.0,
            exponent: 2.0,
            max_halvings: 100,
        }
    }
}

const SIMPLIFIED_ARMIJO_COEFF: f64 = 1.0 / 3.0;

/// Everything [`run_second_order`] needs, bundled.
#[derive(Debug, Clone)]
pub struct SecondOrderConfig {
    pub nqn: NqnConfig,
    pub backtracking: BacktrackingConfig,
    pub simplified: SimplifiedBnqnConfig,
    pub schedule: GammaSchedule,
    /// Seed for the random damping baseline.
    pub damping_seed: u64,
}

impl SecondOrderConfig {
    /// Seeded defaults sized for `obj` (shift list of `obj.dim() + 1`
    /// entries). For manifold runs, size the shift list from the intrinsic
    /// dimension via [`NqnConfig::seeded`] instead.
    pub fn for_objective(obj: &dyn Objective, seed: u64) -> Self {
        Self {
            nqn: NqnConfig::for_objective(obj, seed),
            backtracking: BacktrackingConfig::default(),
            simplified: SimplifiedBnqnConfig::default(),
            schedule: GammaSchedule::doubling(),
            damping_seed: seed,
        }
    }

    pub fn with_nqn(mut self, nqn: NqnConfig) -> Self {
        self.nqn = nqn;
        self
    }
}

/// Second-order update rules. The first three operate on Euclidean space;
/// the last three work on any built-in manifold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondOrderMethod {
    NewQNewton,
    BacktrackingNewQNewton,
    SimplifiedBnqn,
    RiemannianNewQNewton,
    Newton,
    RandomDampedNewton,
}

fn require_positive_gradient(grad_norm: f64) -> Result<()> {
    if grad_norm == 0.0 {
        return Err(OptError::InvalidInput(
            "gradient vanishes; the caller must stop instead of stepping".into(),
        ));
    }
    Ok(())
}

/// `w / max(1, ‖w‖)`.
fn unit_clamped(w: DVector<f64>) -> DVector<f64> {
    let n = w.norm();
    if n > 1.0 {
        w / n
    } else {
        w
    }
}

/// Computes the raw sign-flipped shifted-Newton direction `w` for a
/// symmetric operator and gradient already expressed in the same
/// coordinates; callers apply normalization where their update rule asks
/// for it. Returns `(w, shift_index, shifted_operator, ‖v‖)` with
/// `‖w‖ = ‖v‖` exactly up to rounding.
fn flipped_direction(
    hessian: &SymmetricOperator,
    grad: &DVector<f64>,
    grad_norm: f64,
    cfg: &NqnConfig,
) -> Result<(DVector<f64>, usize, SymmetricOperator, f64)> {
    let scale = grad_norm.powf(cfg.exponent);
    let floor = cfg.floor_for(scale);
    for (index, &coeff) in cfg.deltas.iter().enumerate() {
        let shifted = hessian.shifted(coeff * scale);
        if !shifted.is_invertible(floor) {
            continue;
        }
        let v = shifted.solve(grad)?;
        let (plus, minus) = shifted.project_signed(&v)?;
        let w = plus - minus;
        debug_assert!(
            w.dot(grad) >= -1e-12 * w.norm() * grad_norm,
            "flipped direction lost descent alignment"
        );
        let v_norm = v.norm();
        return Ok((w, index, shifted, v_norm));
    }
    Err(OptError::ShiftExhaustion {
        count: cfg.deltas.len(),
    })
}

/// The Euclidean direction `w` with the accepted shift index and the
/// shifted operator it came from.
///
/// `w` satisfies `⟨w, ∇f(x)⟩ >= 0` and, before normalization, `‖w‖ = ‖v‖`
/// where `v` solves the shifted system.
pub fn nqn_direction(
    obj: &dyn Objective,
    x: &DVector<f64>,
    cfg: &NqnConfig,
) -> Result<(DVector<f64>, usize, SymmetricOperator)> {
    let grad = obj.gradient(x);
    let grad_norm = grad.norm();
    require_positive_gradient(grad_norm)?;
    let hessian = obj.hessian(x).ok_or(OptError::MissingHessian)?;
    let (w, index, shifted, _) = flipped_direction(&hessian, &grad, grad_norm, cfg)?;
    let w = if cfg.normalize_step { unit_clamped(w) } else { w };
    Ok((w, index, shifted))
}

/// One undamped update `x - w`.
pub fn nqn_step(
    obj: &dyn Objective,
    x: &DVector<f64>,
    cfg: &NqnConfig,
) -> Result<(DVector<f64>, usize)> {
    let (w, index, _) = nqn_direction(obj, x, cfg)?;
    Ok((x - w, index))
}

/// Armijo backtracking along a fixed descent direction with slope
/// `⟨w, ∇f(x)⟩`. Returns `(gamma, rejected_trials)`.
fn armijo_on_direction(
    obj: &dyn Objective,
    x: &DVector<f64>,
    w: &DVector<f64>,
    slope: f64,
    bt: &BacktrackingConfig,
) -> Result<(f64, usize)> {
    let f0 = obj.value(x);
    for m in 0..MAX_BACKTRACKS {
        let gamma = bt.grid(m);
        let trial = x - w * gamma;
        if obj.value(&trial) - f0 <= -bt.alpha * gamma * slope {
            return Ok((gamma, m));
        }
    }
    Err(OptError::LineSearchFailure {
        max_trials: MAX_BACKTRACKS,
    })
}

/// One backtracked update `x - γw`: `γ` is the largest `β^m δ₀` with
/// `f(x - γw) - f(x) <= -α γ ⟨w, ∇f(x)⟩`.
pub fn bnqn_step(
    obj: &dyn Objective,
    x: &DVector<f64>,
    cfg: &NqnConfig,
    bt: &BacktrackingConfig,
) -> Result<(DVector<f64>, f64)> {
    let grad = obj.gradient(x);
    let (w, _, _) = nqn_direction(obj, x, cfg)?;
    let (gamma, _) = armijo_on_direction(obj, x, &w, w.dot(&grad), bt)?;
    Ok((x - w * gamma, gamma))
}

/// One simplified update: `A = Abs(∇²f(x)) + δ‖∇f‖^e·Id` is positive
/// definite by construction, so the sign flip is a no-op and a single
/// halving loop from `γ = 1` with coefficient 1/3 picks the step.
/// Returns `(x_next, gamma)`.
pub fn simplified_bnqn_step(
    obj: &dyn Objective,
    x: &DVector<f64>,
    cfg: &SimplifiedBnqnConfig,
) -> Result<(DVector<f64>, f64)> {
    let (next, gamma, _) = simplified_bnqn_step_detailed(obj, x, cfg)?;
    Ok((next, gamma))
}

fn simplified_bnqn_step_detailed(
    obj: &dyn Objective,
    x: &DVector<f64>,
    cfg: &SimplifiedBnqnConfig,
) -> Result<(DVector<f64>, f64, usize)> {
    let grad = obj.gradient(x);
    let grad_norm = grad.norm();
    require_positive_gradient(grad_norm)?;
    let hessian = obj.hessian(x).ok_or(OptError::MissingHessian)?;
    let shifted = hessian
        .abs_operator()
        .shifted(cfg.delta * grad_norm.powf(cfg.exponent));
    let v = shifted.solve(&grad)?;
    let (plus, minus) = shifted.project_signed(&v)?;
    // A positive definite operator has no negative eigenspace, so the two
    // projection branches collapse onto v itself.
    debug_assert!(minus.norm() <= 1e-10 * (1.0 + v.norm()));
    let w = plus - minus;
    let w = if obj.has_compact_sublevels() {
        w
    } else {
        unit_clamped(w)
    };
    let slope = grad.dot(&w);
    let f0 = obj.value(x);
    let mut gamma = 1.0;
    let mut halvings = 0;
    while obj.value(&(x - &w * gamma)) - f0 + gamma * SIMPLIFIED_ARMIJO_COEFF * slope > 0.0 {
        gamma *= 0.5;
        halvings += 1;
        if halvings > cfg.max_halvings {
            return Err(OptError::LineSearchFailure {
                max_trials: cfg.max_halvings,
            });
        }
    }
    Ok((x - &w * gamma, gamma, halvings))
}

/// One manifold update written in an orthonormal tangent frame at `x`.
///
/// The shifted operator is the tangent restriction of the Riemannian
/// Hessian, so the identity in the shift means the identity on the tangent
/// space. The step `-λw` is clamped by `λ = 1/γ_{j+1}` from the schedule
/// cell containing `‖v‖` (with `λ = 1` when the radius is infinite, which
/// reduces the update to the Euclidean one).
///
/// Returns `(x_next, lambda, shift_index)`.
pub fn riemannian_nqn_step(
    obj: &dyn Objective,
    manifold: &Manifold,
    x: &Point,
    cfg: &NqnConfig,
    schedule: &GammaSchedule,
) -> Result<(Point, f64, usize)> {
    let euclid_grad = obj.gradient(x.coords());
    let grad = manifold.riemannian_gradient(&euclid_grad, x);
    let grad_norm = grad.norm();
    require_positive_gradient(grad_norm)?;
    let euclid_hess = obj.hessian(x.coords()).ok_or(OptError::MissingHessian)?;
    let ambient_hess = manifold.riemannian_hessian(&euclid_hess, &euclid_grad, x)?;
    let frame = manifold.tangent_basis(x);
    let tangent_hess = ambient_hess.restrict(&frame);
    let tangent_grad = frame.transpose() * grad.coords();

    let (w, index, _, v_norm) = flipped_direction(&tangent_hess, &tangent_grad, grad_norm, cfg)?;

    // With a finite radius the schedule clamp does the damping; on an
    // unbounded retraction the update reduces to the Euclidean rule,
    // normalization included.
    let radius = manifold.retraction_radius(x);
    let (lambda, w) = if radius.is_finite() {
        (schedule.clamp_factor(v_norm, radius), w)
    } else {
        (1.0, if cfg.normalize_step { unit_clamped(w) } else { w })
    };

    let step = manifold.tangent(x, (&frame * w) * (-lambda));
    let next = manifold.retract(x, &step)?;
    Ok((next, lambda, index))
}

/// Runs a second-order method from `x0`, recording one trace row per
/// visited point. Step failures (shift exhaustion, singular Newton
/// systems, failed line searches) terminate the run with
/// [`StopReason::StepError`] instead of propagating.
pub fn run_second_order(
    obj: &dyn Objective,
    manifold: &Manifold,
    x0: &Point,
    method: SecondOrderMethod,
    cfg: &SecondOrderConfig,
    stop: &StopCriteria,
) -> IterationTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.damping_seed);
    let euclidean_only = matches!(
        method,
        SecondOrderMethod::NewQNewton
            | SecondOrderMethod::BacktrackingNewQNewton
            | SecondOrderMethod::SimplifiedBnqn
    );

    let mut records: Vec<TraceRecord> = Vec::new();
    let mut x = x0.clone();
    loop {
        let iter = records.len();
        let value = obj.value(x.coords());
        let grad = manifold.riemannian_gradient(&obj.gradient(x.coords()), &x);
        let grad_norm = grad.norm();

        let mut terminal = |reason: StopReason| IterationTrace {
            records: {
                let mut r = std::mem::take(&mut records);
                r.push(TraceRecord {
                    iter,
                    point: x.coords().clone(),
                    value,
                    grad_norm,
                    step_size: 0.0,
                    backtracks: 0,
                    shift_index: None,
                });
                r
            },
            stop_reason: reason,
        };

        if grad_norm <= stop.grad_tol {
            return terminal(StopReason::GradientBelowTol);
        }
        if value < VALUE_DIVERGENCE_FLOOR {
            return terminal(StopReason::ValueDiverging);
        }
        if iter >= stop.max_iters {
            return terminal(StopReason::MaxIterations);
        }
        if euclidean_only && !manifold.is_euclidean() {
            return terminal(StopReason::StepError(format!(
                "{method:?} operates on Euclidean space; use RiemannianNewQNewton on manifolds"
            )));
        }

        let stepped: Result<(Point, f64, usize, Option<usize>)> = match method {
            SecondOrderMethod::NewQNewton => {
                nqn_direction(obj, x.coords(), &cfg.nqn).and_then(|(w, j, _)| {
                    let next = manifold.point(x.coords() - w)?;
                    Ok((next, 1.0, 0, Some(j)))
                })
            }
            SecondOrderMethod::BacktrackingNewQNewton => {
                nqn_direction(obj, x.coords(), &cfg.nqn).and_then(|(w, j, _)| {
                    let slope = w.dot(grad.coords());
                    let (gamma, trials) =
                        armijo_on_direction(obj, x.coords(), &w, slope, &cfg.backtracking)?;
                    let next = manifold.point(x.coords() - w * gamma)?;
                    Ok((next, gamma, trials, Some(j)))
                })
            }
            SecondOrderMethod::SimplifiedBnqn => {
                simplified_bnqn_step_detailed(obj, x.coords(), &cfg.simplified).and_then(
                    |(coords, gamma, halvings)| {
                        Ok((manifold.point(coords)?, gamma, halvings, None))
                    },
                )
            }
            SecondOrderMethod::RiemannianNewQNewton => {
                riemannian_nqn_step(obj, manifold, &x, &cfg.nqn, &cfg.schedule)
                    .map(|(next, lambda, j)| (next, lambda, 0, Some(j)))
            }
            SecondOrderMethod::Newton | SecondOrderMethod::RandomDampedNewton => {
                newton_step(obj, manifold, &x, method, &mut rng)
            }
        };

        match stepped {
            Ok((next, step_size, backtracks, shift_index)) => {
                records.push(TraceRecord {
                    iter,
                    point: x.coords().clone(),
                    value,
                    grad_norm,
                    step_size,
                    backtracks,
                    shift_index,
                });
                x = next;
            }
            Err(e) => return terminal(StopReason::StepError(e.to_string())),
        }
    }
}

/// The Newton baseline `x_{n+1} = R_x(-factor · Hess⁻¹ grad)` in the
/// tangent frame. Surfaces singular-Hessian errors; that is its documented
/// failure mode. The random damping variant scales each step by a seeded
/// uniform factor in `[0.5, 1.5]`.
fn newton_step(
    obj: &dyn Objective,
    manifold: &Manifold,
    x: &Point,
    method: SecondOrderMethod,
    rng: &mut ChaCha8Rng,
) -> Result<(Point, f64, usize, Option<usize>)> {
    let euclid_grad = obj.gradient(x.coords());
    let grad = manifold.riemannian_gradient(&euclid_grad, x);
    let euclid_hess = obj.hessian(x.coords()).ok_or(OptError::MissingHessian)?;
    let ambient_hess = manifold.riemannian_hessian(&euclid_hess, &euclid_grad, x)?;
    let frame = manifold.tangent_basis(x);
    let tangent_hess = ambient_hess.restrict(&frame);
    let tangent_grad = frame.transpose() * grad.coords();
    let direction = tangent_hess.solve(&tangent_grad)?;
    let factor = match method {
        SecondOrderMethod::RandomDampedNewton => rng.random_range(0.5..=1.5),
        _ => 1.0,
    };
    let step = manifold.tangent(x, (&frame * direction) * (-factor));
    let next = manifold.retract(x, &step)?;
    Ok((next, factor, 0, None))
}

//! Backtracking gradient descent and its local-Lipschitz variant, on any of
//! the built-in manifolds.
//!
//! Both methods walk the geometric step-size grid `{β^m δ₀}` from above.
//! The Armijo variant accepts the first grid member that yields sufficient
//! decrease; the local variant instead picks the first grid member below
//! `α/L(x)` and below the radius cap, spending no function evaluations at
//! all. Each driver records an [`IterationTrace`] suitable for tests and
//! experiment harnesses.

use nalgebra::DVector;

use crate::error::{OptError, Result};
use crate::manifold::{Manifold, Point, TangentVector};
use crate::objective::Objective;

/// Hard cap on line-search trials. Termination is guaranteed analytically,
/// so running into this bound signals a broken gradient callback or an
/// `alpha` too close to 1.
pub const MAX_BACKTRACKS: usize = 100;

/// Values below this are treated as diverging to `-∞`.
pub const VALUE_DIVERGENCE_FLOOR: f64 = -1e15;

/// Parameters of the geometric step-size grid and the sufficient-decrease
/// test: `alpha, beta ∈ (0,1)`, `delta0 > 0`.
#[derive(Debug, Clone, Copy)]
pub struct BacktrackingConfig {
    pub alpha: f64,
    pub beta: f64,
    pub delta0: f64,
}

impl BacktrackingConfig {
    pub fn new(alpha: f64, beta: f64, delta0: f64) -> Result<Self> {
        let ok = alpha.is_finite()
            && beta.is_finite()
            && delta0.is_finite()
            && 0.0 < alpha
            && alpha < 1.0
            && 0.0 < beta
            && beta < 1.0
            && delta0 > 0.0;
        if !ok {
            return Err(OptError::InvalidInput(format!(
                "need 0 < alpha, beta < 1 and delta0 > 0, got alpha={alpha}, beta={beta}, delta0={delta0}"
            )));
        }
        Ok(Self {
            alpha,
            beta,
            delta0,
        })
    }

    /// The grid member `β^m δ₀`.
    pub fn grid(&self, m: usize) -> f64 {
        self.delta0 * self.beta.powi(m as i32)
    }
}

impl Default for BacktrackingConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            beta: 0.5,
            delta0: 1.0,
        }
    }
}

/// Stopping thresholds for the iteration drivers.
#[derive(Debug, Clone, Copy)]
pub struct StopCriteria {
    pub grad_tol: f64,
    pub max_iters: usize,
}

impl StopCriteria {
    pub fn new(grad_tol: f64, max_iters: usize) -> Self {
        Self {
            grad_tol,
            max_iters,
        }
    }
}

impl Default for StopCriteria {
    fn default() -> Self {
        Self {
            grad_tol: 1e-10,
            max_iters: 10_000,
        }
    }
}

/// Why a driver stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StopReason {
    GradientBelowTol,
    MaxIterations,
    StepError(String),
    ValueDiverging,
}

/// One row of an iteration trace. `step_size` and `backtracks` describe the
/// step *leaving* this point; they are zero on the terminal record.
/// `shift_index` is the index of the accepted Hessian shift for the
/// Newton-family methods.
#[derive(Debug, Clone)]
pub struct TraceRecord {
    pub iter: usize,
    pub point: DVector<f64>,
    pub value: f64,
    pub grad_norm: f64,
    pub step_size: f64,
    pub backtracks: usize,
    pub shift_index: Option<usize>,
}

/// The full history of a run: one record per visited point plus the reason
/// the driver stopped.
#[derive(Debug, Clone)]
pub struct IterationTrace {
    pub records: Vec<TraceRecord>,
    pub stop_reason: StopReason,
}

impl IterationTrace {
    /// Number of update steps taken (one less than the record count).
    pub fn iterations(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    pub fn final_record(&self) -> &TraceRecord {
        self.records.last().expect("a trace always has at least one record")
    }

    pub fn final_point(&self) -> &DVector<f64> {
        &self.final_record().point
    }

    pub fn converged(&self) -> bool {
        self.stop_reason == StopReason::GradientBelowTol
    }
}

/// First-order update rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirstOrderMethod {
    /// Armijo backtracking: largest grid step with sufficient decrease.
    Backtracking,
    /// Largest grid step below `α/L(x)` and the radius cap; no function
    /// evaluations.
    LocalBacktracking,
}

/// Finds the largest `δ ∈ {β^m δ₀}` satisfying both the radius cap
/// `δ‖grad‖ < r(x)/2` (vacuous when `r = ∞`) and the Armijo condition
/// `f(R_x(-δ·grad)) - f(x) <= -α δ ‖grad‖²`.
///
/// `direction` must be the Riemannian gradient at `x` with positive norm.
/// Returns the step together with the number of rejected trials.
pub fn armijo_step_size(
    obj: &dyn Objective,
    manifold: &Manifold,
    x: &Point,
    direction: &TangentVector,
    cfg: &BacktrackingConfig,
) -> Result<(f64, usize)> {
    let grad_norm = direction.norm();
    let f0 = obj.value(x.coords());
    let radius = manifold.retraction_radius(x);
    for m in 0..MAX_BACKTRACKS {
        let delta = cfg.grid(m);
        if radius.is_finite() && delta * grad_norm >= 0.5 * radius {
            continue;
        }
        let trial = manifold.retract(x, &direction.scaled(-delta))?;
        if obj.value(trial.coords()) - f0 <= -cfg.alpha * delta * grad_norm * grad_norm {
            return Ok((delta, m));
        }
    }
    Err(OptError::LineSearchFailure {
        max_trials: MAX_BACKTRACKS,
    })
}

/// Finds the largest `δ ∈ {β^m δ₀}` with `δ < α/L(x)` and `δ‖grad‖` below
/// the radius cap, both strict.
///
/// On Euclidean space the cap is the objective's own local radius `r(x)`;
/// on a curved manifold it is half the retraction radius.
pub fn local_step_size(
    obj: &dyn Objective,
    manifold: &Manifold,
    x: &Point,
    cfg: &BacktrackingConfig,
) -> Result<(f64, usize)> {
    let lipschitz = obj
        .local_lipschitz(x.coords())
        .ok_or(OptError::MissingLocalData)?;
    let cap = if manifold.is_euclidean() {
        obj.local_radius(x.coords())
            .ok_or(OptError::MissingLocalData)?
    } else {
        0.5 * manifold.retraction_radius(x)
    };
    let grad_norm = manifold
        .riemannian_gradient(&obj.gradient(x.coords()), x)
        .norm();
    let rate_bound = cfg.alpha / lipschitz;
    for m in 0..4000 {
        let delta = cfg.grid(m);
        if delta < rate_bound && (!cap.is_finite() || delta * grad_norm < cap) {
            return Ok((delta, m));
        }
        if delta == 0.0 {
            break;
        }
    }
    Err(OptError::LineSearchFailure { max_trials: 4000 })
}

/// Runs a first-order method from `x0` until the Riemannian gradient norm
/// drops to `grad_tol`, the iteration budget runs out, the value diverges,
/// or a step fails. Step errors are recorded in the trace rather than
/// returned, so a trace is always produced.
pub fn run_gd(
    obj: &dyn Objective,
    manifold: &Manifold,
    x0: &Point,
    method: FirstOrderMethod,
    cfg: &BacktrackingConfig,
    stop: &StopCriteria,
) -> IterationTrace {
    let mut records = Vec::new();
    let mut x = x0.clone();
    loop {
        let iter = records.len();
        let value = obj.value(x.coords());
        let grad = manifold.riemannian_gradient(&obj.gradient(x.coords()), &x);
        let grad_norm = grad.norm();

        let mut terminal = |x: &Point, reason: StopReason| IterationTrace {
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
            return terminal(&x, StopReason::GradientBelowTol);
        }
        if value < VALUE_DIVERGENCE_FLOOR {
            return terminal(&x, StopReason::ValueDiverging);
        }
        if iter >= stop.max_iters {
            return terminal(&x, StopReason::MaxIterations);
        }

        let picked = match method {
            FirstOrderMethod::Backtracking => armijo_step_size(obj, manifold, &x, &grad, cfg),
            FirstOrderMethod::LocalBacktracking => local_step_size(obj, manifold, &x, cfg),
        };
        let (delta, backtracks) = match picked {
            Ok(p) => p,
            Err(e) => return terminal(&x, StopReason::StepError(e.to_string())),
        };
        let next = match manifold.retract(&x, &grad.scaled(-delta)) {
            Ok(p) => p,
            Err(e) => return terminal(&x, StopReason::StepError(e.to_string())),
        };

        // With alpha <= 1/2 the Lipschitz bound implies the Armijo decrease
        // for the local rule; cheap to verify while debugging.
        #[cfg(debug_assertions)]
        if method == FirstOrderMethod::LocalBacktracking && cfg.alpha <= 0.5 {
            let decrease = obj.value(next.coords()) - value;
            debug_assert!(
                decrease <= -cfg.alpha * delta * grad_norm * grad_norm + 1e-12,
                "local step lost the descent guarantee: decrease {decrease:.3e}"
            );
        }

        records.push(TraceRecord {
            iter,
            point: x.coords().clone(),
            value,
            grad_norm,
            step_size: delta,
            backtracks,
            shift_index: None,
        });
        x = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::{make_poisson_1d, make_quadratic_sphere, make_test_saddle, SaddleKind, Sign};
    use crate::spectral::SymmetricOperator;
    use approx::assert_relative_eq;

    /// 1-D quadratic c·x²/2 with hand-rolled local data, for step-size tests.
    struct ScalarQuad {
        curvature: f64,
        lipschitz: f64,
        radius: f64,
    }

    impl Objective for ScalarQuad {
        fn dim(&self) -> usize {
            1
        }
        fn value(&self, x: &DVector<f64>) -> f64 {
            0.5 * self.curvature * x[0] * x[0]
        }
        fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
            DVector::from_row_slice(&[self.curvature * x[0]])
        }
        fn local_radius(&self, _x: &DVector<f64>) -> Option<f64> {
            Some(self.radius)
        }
        fn local_lipschitz(&self, _x: &DVector<f64>) -> Option<f64> {
            Some(self.lipschitz)
        }
    }

    fn euclid1() -> Manifold {
        Manifold::euclidean(1).unwrap()
    }

    #[test]
    fn armijo_accepts_first_candidate_on_gentle_quadratic() {
        // f(x) = x²/2 at x=1: f(0) - f(1) = -1/2 <= -0.5·1·1.
        let obj = ScalarQuad {
            curvature: 1.0,
            lipschitz: 1.0,
            radius: f64::INFINITY,
        };
        let m = euclid1();
        let x = m.point(DVector::from_row_slice(&[1.0])).unwrap();
        let g = m.riemannian_gradient(&obj.gradient(x.coords()), &x);
        let (delta, trials) = armijo_step_size(&obj, &m, &x, &g, &BacktrackingConfig::default()).unwrap();
        assert_eq!(delta, 1.0);
        assert_eq!(trials, 0);
    }

    #[test]
    fn armijo_matches_brute_force_on_stiff_quadratic() {
        let obj = ScalarQuad {
            curvature: 100.0,
            lipschitz: 100.0,
            radius: f64::INFINITY,
        };
        let cfg = BacktrackingConfig::default();
        let m = euclid1();
        let x0 = 1.0;
        let x = m.point(DVector::from_row_slice(&[x0])).unwrap();
        let g = m.riemannian_gradient(&obj.gradient(x.coords()), &x);

        // Independent oracle: scan the grid directly.
        let f = |x: f64| 50.0 * x * x;
        let grad = 100.0 * x0;
        let expected = (0..20)
            .map(|mm| cfg.grid(mm))
            .find(|d| f(x0 - d * grad) - f(x0) <= -cfg.alpha * d * grad * grad)
            .unwrap();

        let (delta, _) = armijo_step_size(&obj, &m, &x, &g, &cfg).unwrap();
        assert_eq!(delta, expected);
    }

    #[test]
    fn local_step_examples() {
        let cfg = BacktrackingConfig::default();
        let m = euclid1();
        let x = m.point(DVector::from_row_slice(&[1.0])).unwrap();

        // delta < alpha/L = 0.5 strictly: 0.5 is rejected, 0.25 accepted.
        let obj = ScalarQuad {
            curvature: 1.0,
            lipschitz: 1.0,
            radius: f64::INFINITY,
        };
        let (delta, _) = local_step_size(&obj, &m, &x, &cfg).unwrap();
        assert_eq!(delta, 0.25);

        // alpha/L = 5: the first candidate already qualifies.
        let obj = ScalarQuad {
            curvature: 1.0,
            lipschitz: 0.1,
            radius: f64::INFINITY,
        };
        let (delta, _) = local_step_size(&obj, &m, &x, &cfg).unwrap();
        assert_eq!(delta, 1.0);

        // ‖grad‖ = 10 against radius 1: need 10·delta < 1, so delta = 1/16.
        let obj = ScalarQuad {
            curvature: 10.0,
            lipschitz: 1e-6,
            radius: 1.0,
        };
        let (delta, _) = local_step_size(&obj, &m, &x, &cfg).unwrap();
        assert_eq!(delta, 0.0625);
    }

    #[test]
    fn local_step_requires_local_data() {
        let obj = make_test_saddle(SaddleKind::QuadraticSaddle);
        struct NoData(crate::objective::TestSaddle);
        impl Objective for NoData {
            fn dim(&self) -> usize {
                self.0.dim()
            }
            fn value(&self, x: &DVector<f64>) -> f64 {
                self.0.value(x)
            }
            fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
                self.0.gradient(x)
            }
        }
        let m = Manifold::euclidean(2).unwrap();
        let x = m.point(DVector::from_row_slice(&[1.0, 1.0])).unwrap();
        assert!(matches!(
            local_step_size(&NoData(obj), &m, &x, &BacktrackingConfig::default()),
            Err(OptError::MissingLocalData)
        ));
    }

    #[test]
    fn run_gd_stops_immediately_at_critical_point() {
        let obj = make_test_saddle(SaddleKind::QuadraticSaddle);
        let m = Manifold::euclidean(2).unwrap();
        let x0 = m.point(DVector::zeros(2)).unwrap();
        let trace = run_gd(
            &obj,
            &m,
            &x0,
            FirstOrderMethod::Backtracking,
            &BacktrackingConfig::default(),
            &StopCriteria::default(),
        );
        assert_eq!(trace.records.len(), 1);
        assert_eq!(trace.stop_reason, StopReason::GradientBelowTol);
    }

    #[test]
    fn run_gd_poisson_single_node() {
        let obj = make_poisson_1d(1, |_| 1.0).unwrap();
        let m = Manifold::euclidean(1).unwrap();
        let x0 = m.point(DVector::zeros(1)).unwrap();
        for method in [FirstOrderMethod::Backtracking, FirstOrderMethod::LocalBacktracking] {
            let trace = run_gd(
                &obj,
                &m,
                &x0,
                method,
                &BacktrackingConfig::default(),
                &StopCriteria::new(1e-12, 10_000),
            );
            assert!(trace.converged(), "{method:?} did not converge: {:?}", trace.stop_reason);
            assert_relative_eq!(trace.final_point()[0], 0.125, epsilon = 1e-8);
        }
    }

    #[test]
    fn run_gd_sphere_reaches_min_eigenvector() {
        let a = SymmetricOperator::from_rows(&[vec![2.0, 4.0], vec![4.0, 2.0]]).unwrap();
        let obj = make_quadratic_sphere(a, Sign::Plus);
        for m in [
            Manifold::sphere_geodesic(2).unwrap(),
            Manifold::sphere_projective(2).unwrap(),
        ] {
            let x0 = m
                .point(DVector::from_row_slice(&[0.4472136, 0.89442719]))
                .unwrap();
            let trace = run_gd(
                &obj,
                &m,
                &x0,
                FirstOrderMethod::Backtracking,
                &BacktrackingConfig::default(),
                &StopCriteria::new(1e-10, 10),
            );
            assert!(trace.converged());
            // Minimum value is λ_min/2 = -1, at ±(1,-1)/√2.
            assert_relative_eq!(trace.final_record().value, -1.0, epsilon = 1e-9);
            let p = trace.final_point();
            let t = 1.0 / 2.0_f64.sqrt();
            let direct = (p[0] - t).abs().max((p[1] + t).abs());
            let flipped = (p[0] + t).abs().max((p[1] - t).abs());
            assert!(direct.min(flipped) < 0.01, "final point {p:?}");
        }
    }

    #[test]
    fn diverging_value_is_flagged() {
        // Steepest descent on -‖x‖² runs off to infinity.
        struct Concave;
        impl Objective for Concave {
            fn dim(&self) -> usize {
                1
            }
            fn value(&self, x: &DVector<f64>) -> f64 {
                -x[0] * x[0]
            }
            fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
                DVector::from_row_slice(&[-2.0 * x[0]])
            }
        }
        let m = euclid1();
        let x0 = m.point(DVector::from_row_slice(&[1.0])).unwrap();
        let trace = run_gd(
            &Concave,
            &m,
            &x0,
            FirstOrderMethod::Backtracking,
            &BacktrackingConfig::default(),
            &StopCriteria::new(1e-10, 100_000),
        );
        assert_eq!(trace.stop_reason, StopReason::ValueDiverging);
    }
}

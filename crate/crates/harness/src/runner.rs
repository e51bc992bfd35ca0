//! Method-name parsing and a single dispatch point that turns any
//! supported method into an [`IterationTrace`].

use anyhow::{bail, Result};
use newq_core::{
    run_gd, run_second_order, BacktrackingConfig, FirstOrderMethod, IterationTrace, Manifold,
    NqnConfig, Objective, Point, SecondOrderConfig, SecondOrderMethod, StopCriteria, StopReason,
    TraceRecord,
};

/// Fixed learning rate used by the plain gradient-descent baseline.
pub const SGD_RATE: f64 = 0.001;

/// Every method the harness can run, by wire name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodSpec {
    Backtracking,
    LocalBacktracking,
    /// Fixed-rate gradient descent (rate [`SGD_RATE`]).
    Sgd,
    Nqn,
    Bnqn,
    SimplifiedBnqn,
    RiemannianNqn,
    Newton,
    RandomDampedNewton,
}

impl MethodSpec {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "backtracking" => Self::Backtracking,
            "local_backtracking" => Self::LocalBacktracking,
            "sgd" => Self::Sgd,
            "nqn" => Self::Nqn,
            "bnqn" => Self::Bnqn,
            "simplified_bnqn" => Self::SimplifiedBnqn,
            "riemannian_nqn" => Self::RiemannianNqn,
            "newton" => Self::Newton,
            "random_damped_newton" => Self::RandomDampedNewton,
            other => bail!(
                "unknown method {other:?}; expected one of backtracking, local_backtracking, \
                 sgd, nqn, bnqn, simplified_bnqn, riemannian_nqn, newton, random_damped_newton"
            ),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Backtracking => "backtracking",
            Self::LocalBacktracking => "local_backtracking",
            Self::Sgd => "sgd",
            Self::Nqn => "nqn",
            Self::Bnqn => "bnqn",
            Self::SimplifiedBnqn => "simplified_bnqn",
            Self::RiemannianNqn => "riemannian_nqn",
            Self::Newton => "newton",
            Self::RandomDampedNewton => "random_damped_newton",
        }
    }
}

/// Runs `method` from `x0`. The seed feeds the shift-value generation and
/// the random damping baseline; first-order methods ignore it.
pub fn run_method(
    obj: &dyn Objective,
    manifold: &Manifold,
    x0: &Point,
    method: MethodSpec,
    seed: u64,
    bt: &BacktrackingConfig,
    stop: &StopCriteria,
) -> IterationTrace {
    match method {
        MethodSpec::Backtracking => {
            run_gd(obj, manifold, x0, FirstOrderMethod::Backtracking, bt, stop)
        }
        MethodSpec::LocalBacktracking => {
            run_gd(obj, manifold, x0, FirstOrderMethod::LocalBacktracking, bt, stop)
        }
        MethodSpec::Sgd => run_fixed_rate(obj, manifold, x0, SGD_RATE, stop),
        second_order => {
            let mut cfg = SecondOrderConfig::for_objective(obj, seed);
            cfg.backtracking = *bt;
            cfg.nqn = NqnConfig::seeded(manifold.intrinsic_dim(), seed)
                .with_normalization(!obj.has_compact_sublevels());
            let kind = match second_order {
                MethodSpec::Nqn => SecondOrderMethod::NewQNewton,
                MethodSpec::Bnqn => SecondOrderMethod::BacktrackingNewQNewton,
                MethodSpec::SimplifiedBnqn => SecondOrderMethod::SimplifiedBnqn,
                MethodSpec::RiemannianNqn => SecondOrderMethod::RiemannianNewQNewton,
                MethodSpec::Newton => SecondOrderMethod::Newton,
                MethodSpec::RandomDampedNewton => SecondOrderMethod::RandomDampedNewton,
                _ => unreachable!(),
            };
            run_second_order(obj, manifold, x0, kind, &cfg, stop)
        }
    }
}

/// Plain gradient descent with a fixed retraction step, the weakest
/// baseline in the tables.
fn run_fixed_rate(
    obj: &dyn Objective,
    manifold: &Manifold,
    x0: &Point,
    rate: f64,
    stop: &StopCriteria,
) -> IterationTrace {
    let mut records = Vec::new();
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
        if value < -1e15 {
            return terminal(StopReason::ValueDiverging);
        }
        if iter >= stop.max_iters {
            return terminal(StopReason::MaxIterations);
        }
        let next = match manifold.retract(&x, &grad.scaled(-rate)) {
            Ok(p) => p,
            Err(e) => return terminal(StopReason::StepError(e.to_string())),
        };
        records.push(TraceRecord {
            iter,
            point: x.coords().clone(),
            value,
            grad_norm,
            step_size: rate,
            backtracks: 0,
            shift_index: None,
        });
        x = next;
    }
}

//! Basin-of-attraction sweeps: run one method from many seeded starting
//! points and histogram where the runs end up.

use crate::runner::{run_method, MethodSpec};
use anyhow::{bail, Result};
use nalgebra::DVector;
use newq_core::{
    make_quadratic_sphere, make_test_saddle, BacktrackingConfig, Manifold, Objective, SaddleKind,
    Sign, StopCriteria, StopReason,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, Serialize)]
pub struct SweepOutcome {
    pub label: String,
    pub count: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub objective: String,
    pub method: String,
    pub samples: usize,
    pub seed: u64,
    pub outcomes: Vec<SweepOutcome>,
}

impl SweepReport {
    pub fn fraction(&self, label: &str) -> f64 {
        self.outcomes
            .iter()
            .find(|o| o.label == label)
            .map(|o| o.fraction)
            .unwrap_or(0.0)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,count,fraction\n");
        for o in &self.outcomes {
            let _ = writeln!(out, "{},{},{}", o.label, o.count, o.fraction);
        }
        out
    }
}

/// A critical point the sweep can attribute a run to.
struct KnownCritical {
    label: &'static str,
    point: DVector<f64>,
}

struct SweepProblem {
    objective: Box<dyn Objective>,
    manifold: Manifold,
    critical: Vec<KnownCritical>,
    stop: StopCriteria,
}

fn saddle_problem() -> SweepProblem {
    SweepProblem {
        objective: Box::new(make_test_saddle(SaddleKind::QuadraticSaddle)),
        manifold: Manifold::euclidean(2).unwrap(),
        critical: vec![KnownCritical {
            label: "origin_saddle",
            point: DVector::zeros(2),
        }],
        stop: StopCriteria::new(1e-8, 100),
    }
}

fn sphere_example2_problem() -> SweepProblem {
    let a = crate::table1::example2_matrix();
    let eig = a.eigendecompose().clone();
    let critical = vec![
        KnownCritical {
            label: "minimum",
            point: eig.eigenvectors().column(0).into_owned(),
        },
        KnownCritical {
            label: "saddle",
            point: eig.eigenvectors().column(1).into_owned(),
        },
        KnownCritical {
            label: "maximum",
            point: eig.eigenvectors().column(2).into_owned(),
        },
    ];
    SweepProblem {
        objective: Box::new(make_quadratic_sphere(a, Sign::Plus)),
        manifold: Manifold::sphere_geodesic(3).unwrap(),
        critical,
        stop: StopCriteria::new(1e-8, 100),
    }
}

/// Draws the sample's starting point from its own generator, seeded
/// `seed ^ index` so aggregation order cannot matter.
fn sample_start(problem: &SweepProblem, seed: u64, index: usize) -> DVector<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ index as u64);
    let dim = problem.manifold.ambient_dim();
    if problem.manifold.is_euclidean() {
        // Uniform in [-1,1]^2, resampled off the axes where the saddle's
        // stable set lives.
        loop {
            let c = DVector::from_fn(dim, |_, _| rng.random_range(-1.0f64..=1.0));
            if c.iter().all(|v| v.abs() >= 1e-3) {
                return c;
            }
        }
    } else {
        loop {
            let c = DVector::from_fn(dim, |_, _| rng.random_range(-1.0f64..=1.0));
            let n = c.norm();
            if (0.1..=1.0).contains(&n) {
                return c / n;
            }
        }
    }
}

fn outcome_label(problem: &SweepProblem, trace: &newq_core::IterationTrace) -> String {
    if let StopReason::StepError(_) = trace.stop_reason {
        return "error".into();
    }
    if trace.converged() {
        let p = trace.final_point();
        for known in &problem.critical {
            let direct = (p - &known.point).norm();
            let flipped = (p + &known.point).norm();
            if direct.min(flipped) <= 1e-2 {
                return known.label.into();
            }
        }
        return "other_critical".into();
    }
    match trace.stop_reason {
        StopReason::ValueDiverging => "diverged".into(),
        _ => "not_converged".into(),
    }
}

/// Runs `samples` seeded starts of `method` on the named objective
/// (`quadratic_saddle` or `sphere_ex2`) and histograms the outcomes.
pub fn run_sweep(objective: &str, method: MethodSpec, samples: usize, seed: u64) -> Result<SweepReport> {
    let problem = match objective {
        "quadratic_saddle" => saddle_problem(),
        "sphere_ex2" => sphere_example2_problem(),
        other => bail!("unknown sweep objective {other:?}; expected quadratic_saddle or sphere_ex2"),
    };

    let bt = BacktrackingConfig::default();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for index in 0..samples {
        let start = sample_start(&problem, seed, index);
        let x0 = problem.manifold.point(start).unwrap();
        let trace = run_method(
            problem.objective.as_ref(),
            &problem.manifold,
            &x0,
            method,
            seed ^ index as u64,
            &bt,
            &problem.stop,
        );
        *counts.entry(outcome_label(&problem, &trace)).or_default() += 1;
    }

    let outcomes = counts
        .into_iter()
        .map(|(label, count)| SweepOutcome {
            label,
            count,
            fraction: count as f64 / samples as f64,
        })
        .collect();
    Ok(SweepReport {
        objective: objective.to_string(),
        method: method.name().to_string(),
        samples,
        seed,
        outcomes,
    })
}

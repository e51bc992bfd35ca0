//! JSON experiment configs for the `run` subcommand.

use crate::report::{stop_reason_str, write_json, write_trace_csv};
use crate::runner::{run_method, MethodSpec};
use anyhow::{bail, Context, Result};
use nalgebra::DVector;
use newq_core::{
    classify, make_poisson_1d, make_quadratic_sphere, make_test_saddle, read_matrix,
    BacktrackingConfig, IterationTrace, Manifold, Objective, SaddleKind, Sign, StopCriteria,
    SymmetricOperator, DEFAULT_EIG_TOL,
};
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub objective: ObjectiveSpec,
    /// `euclidean`, `sphere_projective` or `sphere_geodesic`.
    pub manifold: String,
    pub method: String,
    /// Starting point in ambient coordinates; normalized onto the sphere.
    pub x0: Vec<f64>,
    #[serde(default)]
    pub stop: StopSpec,
    /// Mandatory: feeds shift generation and the damped-Newton baseline.
    pub seed: u64,
    #[serde(default)]
    pub backtracking: Option<BacktrackingSpec>,
    /// Optional retraction-radius override (e.g. to run the sphere
    /// uncapped).
    #[serde(default)]
    pub radius_override: Option<f64>,
    /// Where to write the trace CSV and report JSON; stdout when absent.
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectiveSpec {
    /// `sign·⟨Ax,x⟩/2` with an inline matrix.
    QuadraticSphere { matrix: Vec<Vec<f64>>, sign: f64 },
    /// Same, with the matrix loaded from the plain-text exchange format
    /// (dimension first, then rows).
    MatrixFile { path: PathBuf, sign: f64 },
    QuadraticSaddle,
    MonkeySaddle,
    Poisson { n: usize, source: String },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StopSpec {
    pub grad_tol: f64,
    pub max_iters: usize,
}

impl Default for StopSpec {
    fn default() -> Self {
        Self {
            grad_tol: 1e-10,
            max_iters: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BacktrackingSpec {
    pub alpha: f64,
    pub beta: f64,
    pub delta0: f64,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub name: String,
    pub method: String,
    pub stop_reason: String,
    pub iterations: usize,
    pub final_point: Vec<f64>,
    pub final_value: f64,
    pub final_grad_norm: f64,
    /// Tangent-Hessian classification of the endpoint, when the objective
    /// carries a Hessian.
    pub classification: Option<String>,
}

fn sign_from(value: f64) -> Result<Sign> {
    if value == 1.0 {
        Ok(Sign::Plus)
    } else if value == -1.0 {
        Ok(Sign::Minus)
    } else {
        bail!("sign must be 1 or -1, got {value}")
    }
}

fn build_objective(spec: &ObjectiveSpec) -> Result<Box<dyn Objective>> {
    Ok(match spec {
        ObjectiveSpec::QuadraticSphere { matrix, sign } => {
            let a = SymmetricOperator::from_rows(matrix)?;
            Box::new(make_quadratic_sphere(a, sign_from(*sign)?))
        }
        ObjectiveSpec::MatrixFile { path, sign } => {
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            let a = read_matrix(BufReader::new(file))?;
            Box::new(make_quadratic_sphere(a, sign_from(*sign)?))
        }
        ObjectiveSpec::QuadraticSaddle => Box::new(make_test_saddle(SaddleKind::QuadraticSaddle)),
        ObjectiveSpec::MonkeySaddle => Box::new(make_test_saddle(SaddleKind::MonkeySaddle)),
        ObjectiveSpec::Poisson { n, source } => {
            let g = crate::poisson::source_by_name(source)?;
            Box::new(make_poisson_1d(*n, g)?)
        }
    })
}

fn build_manifold(kind: &str, ambient_dim: usize, radius_override: Option<f64>) -> Result<Manifold> {
    let m = match kind {
        "euclidean" => Manifold::euclidean(ambient_dim)?,
        "sphere_projective" => Manifold::sphere_projective(ambient_dim)?,
        "sphere_geodesic" => Manifold::sphere_geodesic(ambient_dim)?,
        other => bail!("unknown manifold {other:?}"),
    };
    Ok(match radius_override {
        Some(r) => m.with_radius_override(r),
        None => m,
    })
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let cfg: ExperimentConfig = serde_json::from_reader(BufReader::new(file))
        .with_context(|| format!("parsing {}", path.display()))?;
    if cfg.x0.is_empty() {
        bail!("x0 must not be empty");
    }
    Ok(cfg)
}

/// Runs one configured experiment and returns the trace alongside the
/// summary report.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<(IterationTrace, RunReport)> {
    let objective = build_objective(&cfg.objective)?;
    if objective.dim() != cfg.x0.len() {
        bail!(
            "x0 has dimension {}, objective expects {}",
            cfg.x0.len(),
            objective.dim()
        );
    }
    let manifold = build_manifold(&cfg.manifold, objective.dim(), cfg.radius_override)?;
    let method = MethodSpec::parse(&cfg.method)?;
    let x0 = manifold.point(DVector::from_row_slice(&cfg.x0))?;
    let bt = match cfg.backtracking {
        Some(b) => BacktrackingConfig::new(b.alpha, b.beta, b.delta0)?,
        None => BacktrackingConfig::default(),
    };
    let stop = StopCriteria::new(cfg.stop.grad_tol, cfg.stop.max_iters);

    let trace = run_method(objective.as_ref(), &manifold, &x0, method, cfg.seed, &bt, &stop);

    let final_point = trace.final_point().clone();
    let classification = manifold
        .point(final_point.clone())
        .ok()
        .and_then(|p| classify(objective.as_ref(), &manifold, &p, stop.grad_tol, DEFAULT_EIG_TOL).ok())
        .map(|r| format!("{:?}", r.label));
    let report = RunReport {
        name: cfg.name.clone(),
        method: cfg.method.clone(),
        stop_reason: stop_reason_str(&trace.stop_reason),
        iterations: trace.iterations(),
        final_point: final_point.iter().copied().collect(),
        final_value: trace.final_record().value,
        final_grad_norm: trace.final_record().grad_norm,
        classification,
    };
    Ok((trace, report))
}

/// Runs the experiment and writes/prints its outputs per the config.
pub fn execute(cfg: &ExperimentConfig) -> Result<RunReport> {
    let (trace, report) = run_experiment(cfg)?;
    if let Some(dir) = &cfg.out_dir {
        write_trace_csv(&dir.join(format!("{}_trace.csv", report.name)), &trace)?;
        write_json(&dir.join(format!("{}_report.json", report.name)), &report)?;
    } else {
        println!("{}", serde_json::to_string_pretty(&report)?);
    }
    Ok(report)
}

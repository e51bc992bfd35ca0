//! Poisson proxy experiment: minimize the discrete energy with an
//! iterative solver and compare against direct elimination.

use crate::report::stop_reason_str;
use crate::runner::{run_method, MethodSpec};
use anyhow::{bail, Result};
use nalgebra::DVector;
use newq_core::{make_poisson_1d, BacktrackingConfig, Manifold, StopCriteria};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct PoissonReport {
    pub n: usize,
    pub source: String,
    pub method: String,
    pub iterations: usize,
    pub stop_reason: String,
    pub final_grad_norm: f64,
    /// `‖u - u_direct‖_∞ / ‖u_direct‖_∞` (absolute when the oracle is
    /// identically zero).
    pub sup_error_vs_direct: f64,
}

pub fn source_by_name(name: &str) -> Result<fn(f64) -> f64> {
    Ok(match name {
        "sin_pi" => |x: f64| std::f64::consts::PI.powi(2) * (std::f64::consts::PI * x).sin(),
        "one" => |_: f64| 1.0,
        "zero" => |_: f64| 0.0,
        other => bail!("unknown source {other:?}; expected sin_pi, one or zero"),
    })
}

/// Direct elimination (Thomas algorithm) on the tridiagonal stiffness
/// system; the oracle the iterative runs are judged against.
pub fn direct_solve(n: usize, load: &DVector<f64>) -> DVector<f64> {
    let h = 1.0 / (n as f64 + 1.0);
    let (diag, off) = (2.0 / h, -1.0 / h);
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = off / diag;
    d[0] = load[0] / diag;
    for i in 1..n {
        let denom = diag - off * c[i - 1];
        c[i] = if i < n - 1 { off / denom } else { 0.0 };
        d[i] = (load[i] - off * d[i - 1]) / denom;
    }
    let mut u = DVector::zeros(n);
    u[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        u[i] = d[i] - c[i] * u[i + 1];
    }
    u
}

pub fn run_poisson(n: usize, source: &str, method: MethodSpec, seed: u64) -> Result<PoissonReport> {
    if n == 0 {
        bail!("n must be at least 1");
    }
    if n > 500 {
        bail!("n capped at 500; the simplified solver eigendecomposes dense n x n operators");
    }
    let g = source_by_name(source)?;
    let obj = make_poisson_1d(n, g)?;
    let oracle = direct_solve(n, obj.load());

    let manifold = Manifold::euclidean(n)?;
    let u0 = manifold.point(DVector::zeros(n))?;
    let stop = match method {
        MethodSpec::SimplifiedBnqn | MethodSpec::Nqn | MethodSpec::Bnqn | MethodSpec::Newton => {
            StopCriteria::new(1e-10, 100)
        }
        _ => StopCriteria::new(1e-8, 200_000),
    };
    let trace = run_method(
        &obj,
        &manifold,
        &u0,
        method,
        seed,
        &BacktrackingConfig::default(),
        &stop,
    );

    let diff = (trace.final_point() - &oracle).amax();
    let scale = oracle.amax();
    let sup_error = if scale > 0.0 { diff / scale } else { diff };
    Ok(PoissonReport {
        n,
        source: source.to_string(),
        method: method.name().to_string(),
        iterations: trace.iterations(),
        stop_reason: stop_reason_str(&trace.stop_reason),
        final_grad_norm: trace.final_record().grad_norm,
        sup_error_vs_direct: sup_error,
    })
}

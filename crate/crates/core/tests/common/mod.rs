//! Shared oracles and helpers for the integration test suites. Everything
//! here is independent of the library's own solution paths: finite
//! differences for derivative checks, closed-form characteristic-polynomial
//! roots for small eigenproblems, and a tridiagonal elimination solver for
//! the Poisson oracle.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use newq_core::Objective;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(rng: &mut ChaCha8Rng, dim: usize, half_width: f64) -> DVector<f64> {
    DVector::from_fn(dim, |_, _| rng.random_range(-half_width..=half_width))
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, dim: usize, half_width: f64) -> DMatrix<f64> {
    let m = DMatrix::from_fn(dim, dim, |_, _| rng.random_range(-half_width..=half_width));
    0.5 * (&m + m.transpose())
}

/// Central finite-difference gradient of `obj` at `x`.
pub fn fd_gradient(obj: &dyn Objective, x: &DVector<f64>, h: f64) -> DVector<f64> {
    let mut g = DVector::zeros(x.len());
    for i in 0..x.len() {
        let mut plus = x.clone();
        let mut minus = x.clone();
        plus[i] += h;
        minus[i] -= h;
        g[i] = (obj.value(&plus) - obj.value(&minus)) / (2.0 * h);
    }
    g
}

/// Central finite-difference Jacobian of the gradient (a Hessian estimate).
pub fn fd_hessian(obj: &dyn Objective, x: &DVector<f64>, h: f64) -> DMatrix<f64> {
    let n = x.len();
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut plus = x.clone();
        let mut minus = x.clone();
        plus[j] += h;
        minus[j] -= h;
        let col = (obj.gradient(&plus) - obj.gradient(&minus)) / (2.0 * h);
        m.column_mut(j).copy_from(&col);
    }
    m
}

/// Max per-coordinate deviation of `p` from `target`, up to a global sign.
pub fn coord_error_up_to_sign(p: &DVector<f64>, target: &[f64]) -> f64 {
    let direct = (0..target.len())
        .map(|i| (p[i] - target[i]).abs())
        .fold(0.0_f64, f64::max);
    let flipped = (0..target.len())
        .map(|i| (p[i] + target[i]).abs())
        .fold(0.0_f64, f64::max);
    direct.min(flipped)
}

/// Eigenvalues of a small symmetric matrix from the roots of its
/// characteristic polynomial, ascending. Supports dimensions 1-3; this is
/// the independent cross-check for the dense eigensolver.
pub fn charpoly_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    match a.nrows() {
        1 => vec![a[(0, 0)]],
        2 => {
            let (p, q, r) = (a[(0, 0)], a[(1, 1)], a[(0, 1)]);
            let mean = 0.5 * (p + q);
            let disc = (0.25 * (p - q) * (p - q) + r * r).sqrt();
            vec![mean - disc, mean + disc]
        }
        3 => {
            // λ³ - tr·λ² + m·λ - det = 0 with m the sum of principal 2x2 minors.
            let tr = a[(0, 0)] + a[(1, 1)] + a[(2, 2)];
            let minors = a[(1, 1)] * a[(2, 2)] - a[(1, 2)] * a[(2, 1)]
                + a[(0, 0)] * a[(2, 2)] - a[(0, 2)] * a[(2, 0)]
                + a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
            let det = a[(0, 0)] * (a[(1, 1)] * a[(2, 2)] - a[(1, 2)] * a[(2, 1)])
                - a[(0, 1)] * (a[(1, 0)] * a[(2, 2)] - a[(1, 2)] * a[(2, 0)])
                + a[(0, 2)] * (a[(1, 0)] * a[(2, 1)] - a[(1, 1)] * a[(2, 0)]);
            // Depressed cubic t³ + pt + q with λ = t + tr/3; symmetric
            // matrices have three real roots, so the trigonometric form
            // applies.
            let shift = tr / 3.0;
            let p = minors - tr * tr / 3.0;
            let q = -det + shift * (minors - 2.0 * tr * tr / 9.0);
            let mut roots = if p.abs() < 1e-30 {
                let t = -(q.cbrt());
                vec![t + shift, t + shift, t + shift]
            } else {
                let scale = 2.0 * (-p / 3.0).sqrt();
                let arg = (3.0 * q / (p * scale)).clamp(-1.0, 1.0);
                let theta = arg.acos() / 3.0;
                (0..3)
                    .map(|k| {
                        scale * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift
                    })
                    .collect()
            };
            roots.sort_by(f64::total_cmp);
            roots
        }
        n => panic!("characteristic-polynomial oracle only covers dim <= 3, got {n}"),
    }
}

/// Solves a tridiagonal system by the Thomas algorithm (forward
/// elimination, back substitution). `lower`/`upper` have length `n-1`; no
/// pivoting, which is fine for the diagonally dominant Poisson stiffness.
pub fn thomas_solve(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &DVector<f64>,
) -> DVector<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper.first().copied().unwrap_or(0.0) / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - lower[i - 1] * c[i - 1];
        c[i] = if i < n - 1 { upper[i] / denom } else { 0.0 };
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / denom;
    }
    let mut x = DVector::zeros(n);
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Direct solution of the discrete Poisson system `K u = load` for the
/// standard stiffness `K = (1/h)·tridiag(-1, 2, -1)`.
pub fn poisson_direct_solve(n: usize, load: &DVector<f64>) -> DVector<f64> {
    let h = 1.0 / (n as f64 + 1.0);
    let lower = vec![-1.0 / h; n - 1];
    let diag = vec![2.0 / h; n];
    let upper = vec![-1.0 / h; n - 1];
    thomas_solve(&lower, &diag, &upper, load)
}

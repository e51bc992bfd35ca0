//! The three built-in unit-sphere eigenvector experiments and their
//! method-by-method result table.
//!
//! Each experiment minimizes `sign·⟨Ax,x⟩/2` over the sphere from a fixed
//! starting point, with at most 10 iterations and gradient tolerance
//! 1e-10, and reports each run in `n/x/Remarks` form: iterations used,
//! final point to two decimals, and a letter — `M` near a local minimum,
//! `S` near a saddle point or local maximum, `E` on a step error, blank
//! when the endpoint is not near any critical point.

use crate::report::{self, slug};
use crate::runner::{run_method, MethodSpec};
use anyhow::Result;
use nalgebra::DVector;
use newq_core::{
    classify, make_quadratic_sphere, BacktrackingConfig, CriticalPointLabel, Manifold, Objective,
    Sign, StopCriteria, StopReason, SymmetricOperator, DEFAULT_EIG_TOL,
};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::Path;

/// Default seed for the table runs; shift values and the random damping
/// baseline derive from it.
pub const TABLE1_SEED: u64 = 2024;

/// Gradient-norm threshold under which an endpoint counts as "near" a
/// critical point for the table letters. Converged second-order rows sit at
/// round-off; ten backtracking iterations land around 1e-3..1e-1.
pub const NEAR_CRITICAL_GRAD_TOL: f64 = 0.5;

/// Which sphere retraction the experiments use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Way {
    /// `(x+v)/√(1+‖v‖²)`
    One,
    /// geodesic `cos(‖v‖)x + sin(‖v‖)v/‖v‖`
    Two,
}

impl Way {
    pub fn name(self) -> &'static str {
        match self {
            Way::One => "way1",
            Way::Two => "way2",
        }
    }

    fn manifold(self, ambient_dim: usize) -> Manifold {
        match self {
            Way::One => Manifold::sphere_projective(ambient_dim).unwrap(),
            Way::Two => Manifold::sphere_geodesic(ambient_dim).unwrap(),
        }
    }
}

pub fn example1_matrix() -> SymmetricOperator {
    SymmetricOperator::from_rows(&[vec![2.0, 4.0], vec![4.0, 2.0]]).unwrap()
}

pub fn example2_matrix() -> SymmetricOperator {
    SymmetricOperator::from_rows(&[
        vec![-23.0, -61.0, 40.0],
        vec![-61.0, -39.5, 155.0],
        vec![40.0, 155.0, -50.0],
    ])
    .unwrap()
}

pub fn example_start(example: usize) -> Vec<f64> {
    match example {
        1 => vec![0.4472136, 0.89442719],
        _ => vec![0.29369586, 0.54091459, 0.78813333],
    }
}

fn example_objective(example: usize) -> impl Objective {
    match example {
        1 => make_quadratic_sphere(example1_matrix(), Sign::Plus),
        2 => make_quadratic_sphere(example2_matrix(), Sign::Plus),
        3 => make_quadratic_sphere(example2_matrix(), Sign::Minus),
        _ => unreachable!(),
    }
}

/// The five table methods, in row order. The random damping law of the
/// `Riem Rand Newton` baseline is a best-effort stand-in (uniform factor in
/// [0.5, 1.5]); its rows are compared loosely or not at all.
pub const TABLE_METHODS: [(&str, MethodSpec); 5] = [
    ("Riem Newton", MethodSpec::Newton),
    ("Riem New Q", MethodSpec::RiemannianNqn),
    ("Riem Rand Newton", MethodSpec::RandomDampedNewton),
    ("Riem Backtrack", MethodSpec::Backtracking),
    ("Riem SGD", MethodSpec::Sgd),
];

/// One run's summary cell.
#[derive(Debug, Clone, Serialize)]
pub struct TableCell {
    pub iterations: usize,
    pub point: Vec<f64>,
    /// `Some('M')`, `Some('S')`, or `None` for blank.
    pub letter: Option<char>,
    pub error: bool,
}

impl TableCell {
    /// `n/(x…)/letter` with two-decimal coordinates, `E` on errors.
    pub fn render(&self) -> String {
        let coords = self
            .point
            .iter()
            .map(|c| format!("{c:.2}"))
            .collect::<Vec<_>>()
            .join(",");
        let mut out = format!("{}/({})", self.iterations, coords);
        if self.error {
            out.push_str("/E");
        } else if let Some(letter) = self.letter {
            out.push('/');
            out.push(letter);
        }
        out
    }
}

/// Full table for one retraction: rows are methods, columns examples 1-3.
#[derive(Debug, Clone, Serialize)]
pub struct Table1 {
    pub retraction: String,
    pub seed: u64,
    pub methods: Vec<String>,
    /// `cells[row][col]` for method row, example col.
    pub cells: Vec<Vec<TableCell>>,
}

/// Runs all fifteen experiments for one retraction. When `out_dir` is
/// given, per-run traces are written there as CSV.
pub fn run_table1(way: Way, seed: u64, out_dir: Option<&Path>) -> Result<Table1> {
    let stop = StopCriteria::new(1e-10, 10);
    let bt = BacktrackingConfig::default();

    let mut cells = Vec::new();
    for (display, method) in TABLE_METHODS {
        let mut row = Vec::new();
        for example in 1..=3usize {
            let obj = example_objective(example);
            let manifold = way.manifold(obj.dim());
            let x0 = manifold
                .point(DVector::from_row_slice(&example_start(example)))
                .unwrap();
            let trace = run_method(&obj, &manifold, &x0, method, seed, &bt, &stop);
            if let Some(dir) = out_dir {
                let file = dir.join(format!(
                    "table1_{}_example{example}_{}.csv",
                    way.name(),
                    slug(display)
                ));
                report::write_trace_csv(&file, &trace)?;
            }
            let error = matches!(trace.stop_reason, StopReason::StepError(_));
            let final_point = trace.final_point();
            let letter = if error {
                None
            } else {
                letter_for(&obj, &manifold, final_point)
            };
            row.push(TableCell {
                iterations: trace.iterations(),
                point: final_point.iter().copied().collect(),
                letter,
                error,
            });
        }
        cells.push(row);
    }
    Ok(Table1 {
        retraction: way.name().to_string(),
        seed,
        methods: TABLE_METHODS.iter().map(|(n, _)| n.to_string()).collect(),
        cells,
    })
}

/// Maps the classification at a near-critical threshold onto the table
/// letters, merging saddle and maximum into `S`.
fn letter_for(obj: &dyn Objective, manifold: &Manifold, coords: &DVector<f64>) -> Option<char> {
    let x = manifold.point(coords.clone()).ok()?;
    let report = classify(obj, manifold, &x, NEAR_CRITICAL_GRAD_TOL, DEFAULT_EIG_TOL).ok()?;
    match report.label {
        CriticalPointLabel::Minimum => Some('M'),
        CriticalPointLabel::Maximum | CriticalPointLabel::Saddle => Some('S'),
        _ => None,
    }
}

impl Table1 {
    /// Plain-text table in the `n/x/Remarks` convention.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "Unit-sphere eigenvector experiments, retraction {} (seed {})",
            self.retraction, self.seed
        );
        let _ = writeln!(
            out,
            "{:<18} {:<24} {:<32} Example 3",
            "Method/Function", "Example 1", "Example 2"
        );
        for (name, row) in self.methods.iter().zip(&self.cells) {
            let _ = writeln!(
                out,
                "{:<18} {:<24} {:<32} {}",
                name,
                row[0].render(),
                row[1].render(),
                row[2].render()
            );
        }
        let _ = writeln!(
            out,
            "Format: n/x/Remark. M = near local minimum, S = near saddle or local maximum,\n\
             E = error, blank = not near a critical point. Rand Newton uses a best-effort\n\
             damping law (uniform [0.5, 1.5]) and is only loosely comparable."
        );
        out
    }

    fn cell(&self, method: &str, example: usize) -> &TableCell {
        let row = self
            .methods
            .iter()
            .position(|m| m == method)
            .unwrap_or_else(|| panic!("method {method} missing"));
        &self.cells[row][example - 1]
    }

    /// Self-check against the published two-decimal endpoints: the
    /// backtracking and New Q rows must land within 0.01 per coordinate (up
    /// to global sign) with an `M` label, Newton on example 2 within 0.01
    /// of its saddle/maximum target with an `S`, and the fixed-rate rows
    /// within a loose 0.15 (their exact path depends on details the
    /// published table does not pin down). Returns all mismatches.
    pub fn self_check(&self) -> Vec<String> {
        let mut issues = Vec::new();
        let targets: [(usize, [f64; 3]); 3] = [
            (1, [-0.70, 0.70, f64::NAN]),
            (2, [-0.33, -0.66, 0.66]),
            (3, [-0.13, 0.73, 0.66]),
        ];

        let check_point = |method: &str, example: usize, target: &[f64], tol: f64,
                               want: Option<char>, issues: &mut Vec<String>| {
            let cell = self.cell(method, example);
            let err = coord_error_up_to_sign(&cell.point, target);
            if err > tol {
                issues.push(format!(
                    "{}/{method}/example {example}: endpoint {:?} is {err:.4} from {target:?}",
                    self.retraction, cell.point
                ));
            }
            if let Some(want) = want {
                if cell.letter != Some(want) {
                    issues.push(format!(
                        "{}/{method}/example {example}: label {:?}, expected {want}",
                        self.retraction, cell.letter
                    ));
                }
            }
        };

        for (example, target) in &targets {
            let target = &target[..example_start(*example).len()];
            check_point("Riem Backtrack", *example, target, 0.01, Some('M'), &mut issues);
            check_point("Riem New Q", *example, target, 0.01, Some('M'), &mut issues);
        }
        check_point("Riem Newton", 2, &[-0.13, 0.73, 0.66], 0.01, Some('S'), &mut issues);

        let sgd_targets: [(usize, &[f64]); 3] = [
            (1, &[0.42, 0.90]),
            (2, &[0.32, -0.24, 0.91]),
            (3, &[0.017, 0.701, 0.71]),
        ];
        for (example, target) in sgd_targets {
            check_point("Riem SGD", example, target, 0.15, None, &mut issues);
        }
        issues
    }
}

fn coord_error_up_to_sign(p: &[f64], target: &[f64]) -> f64 {
    let direct = p
        .iter()
        .zip(target)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    let flipped = p
        .iter()
        .zip(target)
        .map(|(a, b)| (a + b).abs())
        .fold(0.0_f64, f64::max);
    direct.min(flipped)
}

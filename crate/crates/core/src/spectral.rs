//! Dense symmetric linear algebra: eigendecomposition, signed spectral
//! projections, the spectral absolute value, and shifted-operator solves.
//!
//! Everything here goes through a full eigendecomposition rather than an LU
//! or Cholesky factorization. That is deliberate: the solvers built on top
//! need the positive/negative eigenspace split of the very same operator
//! they invert, and mixing factorizations would let the two drift apart.
//! Target dimensions are small (a few thousand at most), where a dense
//! symmetric eigensolver is perfectly adequate.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};

use crate::error::{OptError, Result};

/// A dense symmetric matrix with an on-demand, cached eigendecomposition.
///
/// The entries are symmetrized exactly on construction, so
/// `entries[(i, j)] == entries[(j, i)]` always holds bit-for-bit.
#[derive(Debug, Clone)]
pub struct SymmetricOperator {
    entries: DMatrix<f64>,
    spectral: OnceLock<SpectralDecomposition>,
}

/// Eigenvalues in ascending order with matching orthonormal eigenvector
/// columns.
///
/// The decomposition is deterministic for a fixed input: ties stay adjacent
/// under a stable sort, and each eigenvector is oriented so that its entry
/// of largest magnitude is positive (lowest index wins on magnitude ties).
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl SymmetricOperator {
    /// Builds an operator from a square matrix, symmetrizing it as
    /// `(A + Aᵀ)/2`.
    ///
    /// Rejects non-square shapes, empty matrices and non-finite entries.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(OptError::InvalidInput(format!(
                "matrix must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.nrows() == 0 {
            return Err(OptError::InvalidInput("matrix dimension must be >= 1".into()));
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(OptError::InvalidInput("matrix has non-finite entries".into()));
        }
        Ok(Self::symmetrized(entries))
    }

    /// Builds an operator from row slices.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(OptError::InvalidInput(
                "row lengths must all equal the number of rows".into(),
            ));
        }
        let entries = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        Self::new(entries)
    }

    /// The identity operator of the given dimension.
    pub fn identity(dim: usize) -> Self {
        Self::symmetrized(DMatrix::identity(dim, dim))
    }

    /// A diagonal operator.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self::symmetrized(DMatrix::from_diagonal(&DVector::from_row_slice(diag)))
    }

    /// Internal constructor for entries already known to be finite.
    fn symmetrized(entries: DMatrix<f64>) -> Self {
        let half_sum = 0.5 * (&entries + entries.transpose());
        Self {
            entries: half_sum,
            spectral: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Matrix-vector product `A v`.
    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.entries * v
    }

    /// `A + shift * Id`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut entries = self.entries.clone();
        for i in 0..entries.nrows() {
            entries[(i, i)] += shift;
        }
        Self::symmetrized(entries)
    }

    /// Restriction `Qᵀ A Q` to the subspace spanned by the columns of `basis`.
    pub fn restrict(&self, basis: &DMatrix<f64>) -> Self {
        let restricted = basis.transpose() * &self.entries * basis;
        Self::symmetrized(restricted)
    }

    /// Max-row-sum norm `‖A‖_∞`.
    pub fn inf_norm(&self) -> f64 {
        (0..self.dim())
            .map(|i| self.entries.row(i).iter().map(|e| e.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.norm()
    }

    /// Operator norm, i.e. the largest eigenvalue magnitude.
    pub fn operator_norm(&self) -> f64 {
        let eig = &self.eigendecompose().eigenvalues;
        eig[0].abs().max(eig[eig.len() - 1].abs())
    }

    /// Width of the band around zero inside which an eigenvalue counts as
    /// zero: `1e-12 * max(1, ‖A‖_∞)`. The exact-arithmetic determinant test
    /// becomes this relative band in floating point.
    pub fn zero_band(&self) -> f64 {
        1e-12 * self.inf_norm().max(1.0)
    }

    /// The cached eigendecomposition of this operator.
    ///
    /// Construction guarantees finite symmetric entries, so this cannot
    /// fail; the result is memoized on first use.
    pub fn eigendecompose(&self) -> &SpectralDecomposition {
        self.spectral.get_or_init(|| {
            let se = self.entries.clone().symmetric_eigen();
            SpectralDecomposition::from_raw(se.eigenvalues, se.eigenvectors)
        })
    }

    /// Whether every eigenvalue clears `max(floor, zero_band)` in magnitude.
    ///
    /// With `floor = 0` this is the spectral form of the determinant-is-zero
    /// test; a positive floor additionally rejects operators that are merely
    /// close to singular.
    pub fn is_invertible(&self, floor: f64) -> bool {
        self.eigendecompose().min_abs_eigenvalue() > floor.max(self.zero_band())
    }

    /// Splits `v` into its components in the positive and negative
    /// eigenspaces of this operator, so that `v = v_plus + v_minus`.
    ///
    /// Requires the operator to have no eigenvalue inside the zero band;
    /// otherwise part of `v` would belong to neither side.
    pub fn project_signed(&self, v: &DVector<f64>) -> Result<(DVector<f64>, DVector<f64>)> {
        if v.len() != self.dim() {
            return Err(OptError::InvalidInput(format!(
                "vector length {} does not match operator dimension {}",
                v.len(),
                self.dim()
            )));
        }
        let spectral = self.eigendecompose();
        let band = self.zero_band();
        let min_abs = spectral.min_abs_eigenvalue();
        if min_abs <= band {
            return Err(OptError::SingularOperator {
                min_abs_eigenvalue: min_abs,
                tolerance: band,
            });
        }
        let coeffs = spectral.eigenvectors.transpose() * v;
        let mut plus = coeffs.clone();
        let mut minus = coeffs;
        for (i, &lambda) in spectral.eigenvalues.iter().enumerate() {
            if lambda > 0.0 {
                minus[i] = 0.0;
            } else {
                plus[i] = 0.0;
            }
        }
        Ok((
            &spectral.eigenvectors * plus,
            &spectral.eigenvectors * minus,
        ))
    }

    /// The spectral absolute value: same eigenvectors, eigenvalues `|λ|`.
    /// Always positive semidefinite; eigenvalues that are exactly zero stay
    /// zero.
    pub fn abs_operator(&self) -> Self {
        let spectral = self.eigendecompose();
        let abs_values = spectral.eigenvalues.map(f64::abs);
        let scaled = {
            let mut cols = spectral.eigenvectors.clone();
            for (i, mut col) in cols.column_iter_mut().enumerate() {
                col *= abs_values[i];
            }
            cols
        };
        Self::symmetrized(scaled * spectral.eigenvectors.transpose())
    }

    /// Solves `A x = b` through the eigendecomposition,
    /// `x = Q diag(1/λ) Qᵀ b`, so the solution is consistent with
    /// [`project_signed`](Self::project_signed) down to the last bit of the
    /// eigenbasis.
    pub fn solve(&self, b: &DVector<f64>) -> Result<DVector<f64>> {
        if b.len() != self.dim() {
            return Err(OptError::InvalidInput(format!(
                "vector length {} does not match operator dimension {}",
                b.len(),
                self.dim()
            )));
        }
        let spectral = self.eigendecompose();
        let band = self.zero_band();
        let min_abs = spectral.min_abs_eigenvalue();
        if min_abs <= band {
            return Err(OptError::SingularOperator {
                min_abs_eigenvalue: min_abs,
                tolerance: band,
            });
        }
        let mut coeffs = spectral.eigenvectors.transpose() * b;
        for (i, &lambda) in spectral.eigenvalues.iter().enumerate() {
            coeffs[i] /= lambda;
        }
        Ok(&spectral.eigenvectors * coeffs)
    }
}

impl PartialEq for SymmetricOperator {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl SpectralDecomposition {
    /// Sorts eigenpairs ascending and applies the sign convention.
    fn from_raw(eigenvalues: DVector<f64>, eigenvectors: DMatrix<f64>) -> Self {
        let n = eigenvalues.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));

        let sorted_values = DVector::from_fn(n, |i, _| eigenvalues[order[i]]);
        let mut sorted_vectors = DMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            let col = eigenvectors.column(src);
            // Orient so the largest-magnitude entry is positive; on
            // magnitude ties the lowest index decides.
            let mut pivot = 0;
            for r in 1..n {
                if col[r].abs() > col[pivot].abs() {
                    pivot = r;
                }
            }
            let flip = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
            sorted_vectors.column_mut(dst).copy_from(&(col * flip));
        }
        Self {
            eigenvalues: sorted_values,
            eigenvectors: sorted_vectors,
        }
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors as columns, same order as the eigenvalues.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn min_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.abs()).fold(f64::INFINITY, f64::min)
    }

    /// `Q diag(λ) Qᵀ`, for reconstruction checks.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let mut scaled = self.eigenvectors.clone();
        for (i, mut col) in scaled.column_iter_mut().enumerate() {
            col *= self.eigenvalues[i];
        }
        scaled * self.eigenvectors.transpose()
    }
}

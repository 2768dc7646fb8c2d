//! Small dense linear-algebra helpers shared by the modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Relative singular-value threshold used for every rank decision.
pub const RANK_TOL: f64 = 1e-9;

/// Numerical rank: singular values above `rel_tol * max(1, σ_max)`.
pub fn rank(m: &DMatrix<Complex64>, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let cutoff = rel_tol * smax.max(1.0);
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Dimension of the kernel of `m` (as a map from `ncols` dimensions).
pub fn kernel_dim(m: &DMatrix<Complex64>, rel_tol: f64) -> usize {
    m.ncols() - rank(m, rel_tol)
}

/// Smallest singular value divided by the largest; 0 for rank-deficient input.
pub fn inverse_condition(m: &DMatrix<Complex64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if smax == 0.0 {
        0.0
    } else {
        smin / smax
    }
}

/// Least-squares solution of `m x = b` through the SVD.
pub fn lstsq(m: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Option<DMatrix<Complex64>> {
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    svd.solve(b, RANK_TOL * smax.max(f64::MIN_POSITIVE)).ok()
}

/// Orthonormal basis of the column span of `m`, as columns.
pub fn column_space(m: &DMatrix<Complex64>, rel_tol: f64) -> DMatrix<Complex64> {
    let r = rank(m, rel_tol);
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    // nalgebra sorts singular values in decreasing order
    u.columns(0, r).into_owned()
}

/// Distance between the subspaces spanned by two orthonormal column sets,
/// measured as the spectral norm of the projector difference.
pub fn subspace_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    if a.ncols() != b.ncols() {
        return f64::INFINITY;
    }
    let pa = a * a.adjoint();
    let pb = b * b.adjoint();
    let diff = pa - pb;
    diff.svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// Solves a small dense real system with partial-pivot LU.
pub fn solve_real(m: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    m.clone().lu().solve(b)
}

/// Reciprocal condition estimate of a real matrix from its singular values.
pub fn inverse_condition_real(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if smax == 0.0 {
        0.0
    } else {
        smin / smax
    }
}

//! Small dense helpers shared by the analysis modules.

use nalgebra::{DMatrix, DVector};

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `tol · max(σ_max, floor)`.
///
/// `floor` keeps an all-round-off matrix from being measured against its own
/// noise; pass the natural scale of the data (0 to disable).
pub fn numerical_rank(m: &DMatrix<f64>, tol: f64, floor: f64) -> usize {
    let s = singular_values(m);
    rank_of(&s, tol, floor)
}

pub(crate) fn rank_of(sigmas: &[f64], tol: f64, floor: f64) -> usize {
    let top = sigmas.first().copied().unwrap_or(0.0).max(floor);
    if top == 0.0 {
        return 0;
    }
    sigmas.iter().filter(|&&s| s > tol * top).count()
}

/// The `k`-th largest singular value (0-based), zero if the matrix has fewer.
pub fn kth_singular_value(m: &DMatrix<f64>, k: usize) -> f64 {
    singular_values(m).get(k).copied().unwrap_or(0.0)
}

/// Left singular vector of the smallest of the first `nrows` singular values.
///
/// Requires `ncols >= nrows`; otherwise the left null space is nontrivial and
/// any vector orthogonal to the column space is returned with σ = 0.
pub(crate) fn smallest_left_singular(m: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let n = m.nrows();
    if m.ncols() < n {
        // complete the column space and take something orthogonal to it
        let mut full = DMatrix::zeros(n, n);
        full.view_mut((0, 0), (n, m.ncols())).copy_from(m);
        let svd = full.svd(true, false);
        let u = svd.u.unwrap();
        let idx = argmin(svd.singular_values.as_slice());
        return (0.0, u.column(idx).into_owned());
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.unwrap();
    let idx = argmin(svd.singular_values.as_slice());
    (svd.singular_values[idx], u.column(idx).into_owned())
}

/// Right singular vector of the smallest singular value of a tall-or-square matrix.
pub(crate) fn smallest_right_singular(m: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let n = m.ncols();
    if m.nrows() < n {
        let mut full = DMatrix::zeros(n, n);
        full.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        let svd = full.svd(false, true);
        let vt = svd.v_t.unwrap();
        let idx = argmin(svd.singular_values.as_slice());
        return (0.0, vt.row(idx).transpose());
    }
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.unwrap();
    let idx = argmin(svd.singular_values.as_slice());
    (svd.singular_values[idx], vt.row(idx).transpose())
}

fn argmin(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

/// Frobenius inner product.
pub fn frobenius_dot(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

//! Dense complex linear algebra helpers.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;

pub type C = Complex64;
pub type CMat = DMatrix<C>;

/// Solves `a x = b` in place by LU with partial pivoting. `a` is row-major
/// `n x n` and is overwritten; `b` receives the solution. Returns `false`
/// on an exactly singular or non-finite pivot.
pub fn lu_solve_in_place(a: &mut [C], n: usize, b: &mut [C]) -> bool {
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].norm_sqr();
        for i in (k + 1)..n {
            let v = a[i * n + k].norm_sqr();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 || !best.is_finite() {
            return false;
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            b.swap(k, p);
        }
        let inv = C::new(1.0, 0.0) / a[k * n + k];
        for i in (k + 1)..n {
            let f = a[i * n + k] * inv;
            if f.is_zero() {
                continue;
            }
            a[i * n + k] = f;
            let (top, bottom) = a.split_at_mut(i * n);
            let row_k = &top[k * n..k * n + n];
            let row_i = &mut bottom[..n];
            for j in (k + 1)..n {
                row_i[j] -= f * row_k[j];
            }
            b[i] = b[i] - f * b[k];
        }
    }
    for k in (0..n).rev() {
        let mut s = b[k];
        for j in (k + 1)..n {
            s -= a[k * n + j] * b[j];
        }
        b[k] = s / a[k * n + k];
    }
    b.iter().all(|v| v.re.is_finite() && v.im.is_finite())
}

pub fn from_rows(rows: &[Vec<C>]) -> CMat {
    let m = rows.len();
    let n = rows.first().map(|r| r.len()).unwrap_or(0);
    CMat::from_fn(m, n, |i, j| rows[i][j])
}

/// Singular values (descending) and the matching right singular vectors as
/// columns of `V` (so `A = U S V^H`). Rows are zero-padded so that `V` is
/// always square.
pub fn svd_full(a: &CMat) -> (Vec<f64>, CMat) {
    let (m, n) = a.shape();
    let padded = if m < n {
        let mut p = CMat::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let s = svd.singular_values;
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&i, &j| s[j].partial_cmp(&s[i]).unwrap_or(core::cmp::Ordering::Equal));
    let values: Vec<f64> = order.iter().map(|&i| s[i]).collect();
    let v = CMat::from_fn(n, order.len(), |r, c| v_t[(order[c], r)].conj());
    (values, v)
}

pub fn singular_values(a: &CMat) -> Vec<f64> {
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap_or(core::cmp::Ordering::Equal));
    s
}

/// Number of singular values above `rel_tol * sigma_max`.
pub fn numerical_rank(a: &CMat, rel_tol: f64) -> usize {
    let s = singular_values(a);
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > rel_tol * top).count()
}

/// Orthonormal basis of the numerical nullspace (singular values at most
/// `rel_tol * sigma_max`), together with the full singular value list.
pub struct Nullspace {
    pub basis: Vec<Vec<C>>,
    pub singular_values: Vec<f64>,
}

pub fn nullspace(a: &CMat, rel_tol: f64) -> Nullspace {
    let n = a.ncols();
    let (s, v) = svd_full(a);
    let top = s.first().copied().unwrap_or(0.0);
    let mut basis = Vec::new();
    for (k, &sv) in s.iter().enumerate().take(n) {
        if top == 0.0 || sv <= rel_tol * top {
            basis.push((0..n).map(|r| v[(r, k)]).collect());
        }
    }
    Nullspace { basis, singular_values: s }
}

/// Nullspace vectors belonging to the `k` smallest singular values.
pub fn smallest_right_vectors(a: &CMat, k: usize) -> (Vec<Vec<C>>, Vec<f64>) {
    let n = a.ncols();
    let (s, v) = svd_full(a);
    let start = n.saturating_sub(k);
    let vecs = (start..n).map(|c| (0..n).map(|r| v[(r, c)]).collect()).collect();
    (vecs, s)
}

/// Minimum-norm least-squares solution of `a x = b`.
pub fn lstsq(a: &CMat, b: &[C]) -> Vec<C> {
    let rhs = DVector::from_column_slice(b);
    let svd = a.clone().svd(true, true);
    let top = svd.singular_values.iter().fold(0.0f64, |m, v| m.max(*v));
    let eps = top * 1e-13;
    match svd.solve(&rhs, eps) {
        Ok(x) => x.iter().copied().collect(),
        Err(_) => vec![C::zero(); a.ncols()],
    }
}

pub fn mat_vec(a: &CMat, x: &[C]) -> Vec<C> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)] * x[j]).sum())
        .collect()
}

pub fn norm_inf(v: &[C]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.norm()))
}

pub fn norm2(v: &[C]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn det(a: &CMat) -> C {
    a.clone().determinant()
}

/// Ratio of extreme singular values (infinite when singular).
pub fn condition_number(a: &CMat) -> f64 {
    let s = singular_values(a);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Sine of the largest principal angle between the column spans of `a` and
/// `b` (both with linearly independent columns).
pub fn subspace_gap(a: &CMat, b: &CMat) -> f64 {
    let qa = orthonormal_columns(a);
    let qb = orthonormal_columns(b);
    let proj = &qa * (qa.adjoint() * &qb);
    let resid = &qb - proj;
    singular_values(&resid).first().copied().unwrap_or(0.0)
}

fn orthonormal_columns(a: &CMat) -> CMat {
    let (m, n) = a.shape();
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let s = svd.singular_values;
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&i, &j| s[j].partial_cmp(&s[i]).unwrap_or(core::cmp::Ordering::Equal));
    CMat::from_fn(m, n.min(order.len()), |r, c| u[(r, order[c])])
}

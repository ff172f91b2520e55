//! Small dense helpers on flat `f64` slices.

use alloc::vec::Vec;
use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Threshold below which an orthogonalized column counts as dependent.
pub const RANK_TOL: f64 = 1e-10;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a)
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    norm2(a).sqrt()
}

/// `y += a·x`
#[inline]
pub fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn apply_sign_convention(col: &mut [f64]) {
    if let Some(first) = col.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            col.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Orthonormalizes `k` columns of length `n` stored contiguously in `cols`.
///
/// Modified Gram–Schmidt with one re-orthogonalization pass; the first
/// entry of magnitude above 1e-12 of every output column is positive.
/// Returns `false` if some column was (numerically) dependent on the
/// previous ones, in which case `cols` holds garbage.
pub fn orthonormalize(n: usize, k: usize, cols: &mut [f64]) -> bool {
    debug_assert_eq!(cols.len(), n * k);
    for i in 0..k {
        let (done, rest) = cols.split_at_mut(i * n);
        let v = &mut rest[..n];
        let before = norm(v);
        if !(before > 0.0) || !before.is_finite() {
            return false;
        }
        for _pass in 0..2 {
            for j in 0..i {
                let q = &done[j * n..(j + 1) * n];
                let c = dot(q, v);
                axpy(-c, q, v);
            }
        }
        let after = norm(v);
        if after <= RANK_TOL * before {
            return false;
        }
        let inv = 1.0 / after;
        v.iter_mut().for_each(|x| *x *= inv);
        apply_sign_convention(v);
    }
    true
}

/// Greedy orthonormal basis of the span of the given vectors, skipping
/// vectors that are dependent on the ones already accepted.
pub fn span_basis(n: usize, vectors: &[f64], tol: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for v in vectors.chunks(n) {
        let mut w: Vec<f64> = v.to_vec();
        let before = norm(&w);
        if before == 0.0 {
            continue;
        }
        for _pass in 0..2 {
            for q in out.chunks(n) {
                let c = dot(q, &w);
                axpy(-c, q, &mut w);
            }
        }
        let after = norm(&w);
        if after > tol * before.max(1.0) {
            w.iter_mut().for_each(|x| *x /= after);
            apply_sign_convention(&mut w);
            out.extend_from_slice(&w);
        }
    }
    out
}

/// Ratio of extreme singular values of a row-major `n×n` matrix.
pub fn condition_number(n: usize, row_major: &[f64]) -> f64 {
    let m = DMatrix::from_row_slice(n, n, row_major);
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Symmetric positive-definite check by Cholesky.
pub fn is_spd(n: usize, row_major: &[f64]) -> bool {
    for i in 0..n {
        for j in 0..i {
            let (a, b) = (row_major[i * n + j], row_major[j * n + i]);
            if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                return false;
            }
        }
    }
    DMatrix::from_row_slice(n, n, row_major).cholesky().is_some()
}

/// Determinant and inverse of a small symmetric positive-definite matrix.
pub fn spd_det_inverse(n: usize, row_major: &[f64]) -> Result<(f64, Vec<f64>)> {
    let m = DMatrix::from_row_slice(n, n, row_major);
    let ch = m.cholesky().ok_or(Error::NotPositiveDefinite)?;
    let l = ch.l();
    let det: f64 = (0..n).map(|i| l[(i, i)]).product::<f64>().powi(2);
    let inv = ch.inverse();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(inv[(i, j)]);
        }
    }
    Ok((det, out))
}

/// `y = A x` for row-major `A` of shape `rows×cols`.
pub fn matvec(rows: usize, cols: usize, a: &[f64], x: &[f64], y: &mut [f64]) {
    for (i, yi) in y.iter_mut().enumerate().take(rows) {
        *yi = dot(&a[i * cols..(i + 1) * cols], x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthonormalize_produces_identity_gram() {
        let mut c = [1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 2.0, 3.0];
        assert!(orthonormalize(3, 3, &mut c));
        for i in 0..3 {
            for j in 0..3 {
                let g = dot(&c[i * 3..i * 3 + 3], &c[j * 3..j * 3 + 3]);
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((g - e).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn sign_convention_makes_first_entry_positive() {
        let mut c = [-2.0, 1.0];
        assert!(orthonormalize(2, 1, &mut c));
        assert!(c[0] > 0.0);
        let mut c = [0.0, -3.0];
        assert!(orthonormalize(2, 1, &mut c));
        assert_eq!(c, [0.0, 1.0]);
    }

    #[test]
    fn dependent_columns_are_reported() {
        let mut c = [1.0, 2.0, 2.0, 4.0];
        assert!(!orthonormalize(2, 2, &mut c));
    }

    #[test]
    fn span_basis_skips_dependent_vectors() {
        let v = [1.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1.0, 1.0];
        let b = span_basis(3, &v, 1e-10);
        assert_eq!(b.len(), 6);
    }

    #[test]
    fn spd_helpers() {
        let a = [2.0, 0.0, 0.0, 8.0];
        assert!(is_spd(2, &a));
        let (det, inv) = spd_det_inverse(2, &a).unwrap();
        assert!((det - 16.0).abs() < 1e-12);
        assert!((inv[0] - 0.5).abs() < 1e-15 && (inv[3] - 0.125).abs() < 1e-15);
        assert!(!is_spd(2, &[1.0, 2.0, 2.0, 1.0]));
        assert!(!is_spd(2, &[1.0, 0.5, 0.0, 1.0]));
        assert!((condition_number(2, &a) - 4.0).abs() < 1e-12);
    }
}

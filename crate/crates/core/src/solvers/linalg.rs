//! Dense Gaussian elimination for the handful of tiny systems the moment
//! solve produces (a few unknowns at most).

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Pivots below this (after row scaling) are treated as zero.
const PIVOT_FLOOR: f64 = 1e-15;

/// Solves `a·x = b` in place by partial pivoting after scaling every row to
/// unit maximum. `a` is row-major `n × n`.
pub(crate) fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for (row, rhs) in a.iter_mut().zip(b.iter_mut()) {
        let m = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if m == 0.0 || !m.is_finite() {
            return Err(Error::SingularJacobian);
        }
        row.iter_mut().for_each(|v| *v /= m);
        *rhs /= m;
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if a[pivot][col].abs() <= PIVOT_FLOOR {
            return Err(Error::SingularJacobian);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            let (top, bottom) = a.split_at_mut(row);
            for (t, p) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *t -= factor * p;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = alloc::vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Ok(x)
}

/// Unit null vector of a full-rank `m × (m+1)` matrix: the last column of
/// `Q` in a Householder QR factorization of its transpose.
pub(crate) fn null_vector(a: &[Vec<f64>]) -> Result<Vec<f64>> {
    let m = a.len();
    let n = m + 1;
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::invalid("null_vector expects an m x (m+1) matrix"));
    }
    // Columns of `t` are the (row-equilibrated) rows of `a`.
    let mut t: Vec<Vec<f64>> = a
        .iter()
        .map(|row| {
            let s = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            row.iter().map(|v| if s > 0.0 { v / s } else { 0.0 }).collect()
        })
        .collect();
    if t.iter().any(|col| col.iter().all(|v| *v == 0.0 || !v.is_finite())) {
        return Err(Error::SingularJacobian);
    }
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(m);
    for k in 0..m {
        let norm = libm::sqrt(t[k][k..].iter().map(|v| v * v).sum());
        if norm == 0.0 {
            return Err(Error::SingularJacobian);
        }
        let mut v: Vec<f64> = alloc::vec![0.0; n];
        v[k..].copy_from_slice(&t[k][k..]);
        v[k] += if t[k][k] >= 0.0 { norm } else { -norm };
        let vv: f64 = v.iter().map(|x| x * x).sum();
        for col in t.iter_mut().skip(k) {
            let dot: f64 = v.iter().zip(col.iter()).map(|(a, b)| a * b).sum();
            let f = 2.0 * dot / vv;
            col.iter_mut().zip(&v).for_each(|(c, vi)| *c -= f * vi);
        }
        reflectors.push(v);
    }
    // Q·e_n with Q = H₀H₁…H_{m−1}.
    let mut q = alloc::vec![0.0; n];
    q[n - 1] = 1.0;
    for v in reflectors.iter().rev() {
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let dot: f64 = v.iter().zip(&q).map(|(a, b)| a * b).sum();
        let f = 2.0 * dot / vv;
        q.iter_mut().zip(v).for_each(|(c, vi)| *c -= f * vi);
    }
    let norm = libm::sqrt(q.iter().map(|x| x * x).sum());
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::SingularJacobian);
    }
    q.iter_mut().for_each(|x| *x /= norm);
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn solves_small_system() {
        let a = vec![vec![2.0, 1.0, 0.0], vec![1.0, 3.0, 1.0], vec![0.0, 1.0, 4.0]];
        let x = solve(a.clone(), vec![3.0, 5.0, 5.0]).unwrap();
        for (row, rhs) in a.iter().zip([3.0, 5.0, 5.0]) {
            let lhs: f64 = row.iter().zip(&x).map(|(r, x)| r * x).sum();
            assert!((lhs - rhs).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_is_reported() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(matches!(solve(a, vec![1.0, 2.0]), Err(Error::SingularJacobian)));
    }

    #[test]
    fn null_vector_annihilates() {
        let a = vec![vec![1.0, 2.0, 3.0], vec![0.0, 1.0, -1.0]];
        let v = null_vector(&a).unwrap();
        for row in &a {
            let r: f64 = row.iter().zip(&v).map(|(a, b)| a * b).sum();
            assert!(r.abs() < 1e-14);
        }
        let n: f64 = v.iter().map(|x| x * x).sum();
        assert!((n - 1.0).abs() < 1e-14);
    }

    #[test]
    fn null_vector_of_ill_conditioned_rows() {
        // Hilbert-type rows: nearly dependent, as in the linearized moment map.
        let a: Vec<Vec<f64>> = (0..5)
            .map(|i| (0..6).map(|j| 1.0 / (i + j + 1) as f64).collect())
            .collect();
        let v = null_vector(&a).unwrap();
        for row in &a {
            let r: f64 = row.iter().zip(&v).map(|(a, b)| a * b).sum();
            assert!(r.abs() < 1e-13, "{r}");
        }
    }
}

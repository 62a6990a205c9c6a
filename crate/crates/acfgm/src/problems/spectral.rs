//! Power iteration on the Gram matrix `A^T A`.

use crate::linalg::{DenseVector, SparseMatrixCsr};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_CAP: usize = 10_000;

/// Largest eigenvalue of `A^T A` (the squared spectral norm of `A`) by
/// power iteration from a deterministic start vector. Stops when the
/// Rayleigh quotient is stable to the relative tolerance or the
/// iteration cap is hit.
pub fn largest_gram_eigenvalue(a: &SparseMatrixCsr, tol: f64, cap: usize) -> f64 {
    let n = a.cols();
    if n == 0 || a.rows() == 0 || a.nnz() == 0 {
        return 0.0;
    }
    let mut v = DenseVector::from_fn(n, |i| 1.0 + (i as f64) / (n as f64)).expect("finite start");
    let mut v_norm = v.norm();
    let mut estimate = 0.0;
    for _ in 0..cap {
        v = v.scaled(1.0 / v_norm);
        let w = a
            .matvec_t(&a.matvec(&v).expect("dims"))
            .expect("dims");
        let rayleigh = v.dot(&w);
        v_norm = w.norm();
        if v_norm == 0.0 {
            return 0.0;
        }
        if (rayleigh - estimate).abs() <= tol * rayleigh.abs().max(f64::MIN_POSITIVE) {
            return rayleigh;
        }
        estimate = rayleigh;
        v = w;
    }
    estimate
}

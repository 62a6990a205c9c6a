//! First-order oracles for the benchmark problem families.

use super::{spectral, Dataset, ProblemError};
use crate::linalg::DenseVector;
use crate::problem::CompositeProblem;
use crate::prox::ProxTerm;
use std::sync::Arc;

/// `f(x) = ||Ax - b||^2 / m` with `h = 0`.
pub fn least_squares(data: &Arc<Dataset>) -> CompositeProblem {
    let d = Arc::clone(data);
    let m = d.rows() as f64;
    CompositeProblem::new(d.cols(), ProxTerm::Zero, move |x| {
        let residual = d.residual(x);
        let f = residual.norm_sq() / m;
        (f, d.transpose_product(&residual.scaled(2.0 / m)))
    })
}

/// `f(x) = ||Ax - b||^2 / m` with `h(x) = lambda ||x||_1`.
pub fn lasso(data: &Arc<Dataset>, lambda: f64) -> Result<CompositeProblem, ProblemError> {
    let term = ProxTerm::l1(lambda).map_err(|e| ProblemError::Config(e.to_string()))?;
    let d = Arc::clone(data);
    let m = d.rows() as f64;
    Ok(CompositeProblem::new(d.cols(), term, move |x| {
        let residual = d.residual(x);
        let f = residual.norm_sq() / m;
        (f, d.transpose_product(&residual.scaled(2.0 / m)))
    }))
}

/// `f(x) = ||Ax - b|| / sqrt(m)` with `h(x) = lambda ||x||_1`.
///
/// `f` is nonsmooth at zero residual; the returned subgradient there is
/// the zero vector, a valid element of the subdifferential.
pub fn sqrt_lasso(data: &Arc<Dataset>, lambda: f64) -> Result<CompositeProblem, ProblemError> {
    let term = ProxTerm::l1(lambda).map_err(|e| ProblemError::Config(e.to_string()))?;
    let d = Arc::clone(data);
    let sqrt_m = (d.rows() as f64).sqrt();
    Ok(CompositeProblem::new(d.cols(), term, move |x| {
        let residual = d.residual(x);
        let norm = residual.norm();
        if norm == 0.0 {
            return (0.0, DenseVector::zeros(d.cols()));
        }
        let f = norm / sqrt_m;
        let g = d.transpose_product(&residual.scaled(1.0 / (sqrt_m * norm)));
        (f, g)
    }))
}

/// `f(x) = sum_i log(1 + exp(-b_i <a_i, x>))` with `h(x) = lambda ||x||_1`.
///
/// Labels must be in `{-1, +1}`. Evaluation uses the overflow-safe form
/// `log(1 + e^u) = max(u, 0) + log1p(e^{-|u|})`.
pub fn logistic(data: &Arc<Dataset>, lambda: f64) -> Result<CompositeProblem, ProblemError> {
    if !data.has_binary_labels() {
        return Err(ProblemError::InvalidData(
            "logistic regression needs labels in {-1, +1}".into(),
        ));
    }
    let term = ProxTerm::l1(lambda).map_err(|e| ProblemError::Config(e.to_string()))?;
    let d = Arc::clone(data);
    Ok(CompositeProblem::new(d.cols(), term, move |x| {
        let scores = d.product(x);
        let mut f = 0.0;
        let weights = DenseVector::from_fn(d.rows(), |i| {
            let u = -d.targets[i] * scores[i];
            f += log1p_exp(u);
            -d.targets[i] * sigmoid(u)
        })
        .expect("finite logistic weights");
        (f, d.transpose_product(&weights))
    }))
}

/// Upper bound on the Lipschitz constant of the logistic gradient:
/// `lambda_max(K^T K) / 4` where `K = -diag(b) A`. Since the labels are
/// in `{-1, +1}`, `K^T K = A^T A` and the bound reduces to the spectral
/// norm of the design matrix.
pub fn logistic_lipschitz_upper(data: &Dataset) -> f64 {
    spectral::largest_gram_eigenvalue(&data.matrix, spectral::DEFAULT_TOL, spectral::DEFAULT_CAP)
        / 4.0
}

/// Lipschitz constant of the least-squares gradient,
/// `2 lambda_max(A^T A) / m`.
pub fn least_squares_lipschitz(data: &Dataset) -> f64 {
    2.0 * spectral::largest_gram_eigenvalue(
        &data.matrix,
        spectral::DEFAULT_TOL,
        spectral::DEFAULT_CAP,
    ) / data.rows() as f64
}

/// `log(1 + e^u)` without overflow.
#[inline]
fn log1p_exp(u: f64) -> f64 {
    u.max(0.0) + (-u.abs()).exp().ln_1p()
}

/// `1 / (1 + e^{-u})` without overflow.
#[inline]
fn sigmoid(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

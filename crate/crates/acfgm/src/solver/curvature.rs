//! Local curvature estimators.
//!
//! The solver never sees a global Lipschitz constant; it measures the
//! smoothness it actually encounters between consecutive query points.
//! `curvature_first` is the secant estimate used at the very first
//! iteration, `curvature_smooth` the bracket-based estimate afterwards.
//! The `hoelder_*` variants fold a target accuracy `epsilon` into the
//! estimate so the same machinery covers nonsmooth and weakly smooth
//! objectives.

use crate::linalg::DenseVector;
use crate::solver::SolverError;

/// Gradient-difference norm `||g_b - g_a||`.
fn grad_diff_norm_sq(g_a: &DenseVector, g_b: &DenseVector) -> f64 {
    g_a.dist_sq(g_b)
}

/// Convexity bracket `f_prev - f_cur - <g_cur, x_prev - x_cur>`, clamped
/// to zero when roundoff drives it negative.
fn bracket(
    f_prev: f64,
    f_cur: f64,
    g_cur: &DenseVector,
    x_prev: &DenseVector,
    x_cur: &DenseVector,
) -> f64 {
    let mut inner = 0.0;
    for ((g, xp), xc) in g_cur.iter().zip(x_prev.iter()).zip(x_cur.iter()) {
        inner += g * (xp - xc);
    }
    (f_prev - f_cur - inner).max(0.0)
}

/// Secant curvature `||g1 - g0|| / ||x1 - x0||` for the first iteration.
///
/// The initial stepsize must separate the first two query points; equal
/// points are a caller error, not a measurable curvature.
pub fn curvature_first(
    x0: &DenseVector,
    x1: &DenseVector,
    g0: &DenseVector,
    g1: &DenseVector,
) -> Result<f64, SolverError> {
    let dx = x0.dist(x1);
    if dx == 0.0 {
        return Err(SolverError::InvalidState(
            "first-iteration curvature needs distinct query points",
        ));
    }
    Ok(g0.dist(g1) / dx)
}

/// Bracket curvature `||g_cur - g_prev||^2 / (2 B)` with the `0/0 = 0`
/// convention when the bracket vanishes.
pub fn curvature_smooth(
    f_prev: f64,
    f_cur: f64,
    g_prev: &DenseVector,
    g_cur: &DenseVector,
    x_prev: &DenseVector,
    x_cur: &DenseVector,
) -> f64 {
    let b = bracket(f_prev, f_cur, g_cur, x_prev, x_cur);
    if b == 0.0 {
        return 0.0;
    }
    grad_diff_norm_sq(g_prev, g_cur) / (2.0 * b)
}

/// Accuracy-relaxed first-iteration curvature.
///
/// Evaluates `(sqrt(||dx||^2 ||dg||^2 + (eps/4)^2) - eps/4) / ||dx||^2`
/// in the cancellation-free form `||dg||^2 / (sqrt(...) + eps/4)`.
pub fn curvature_hoelder_first(
    x0: &DenseVector,
    x1: &DenseVector,
    g0: &DenseVector,
    g1: &DenseVector,
    epsilon: f64,
) -> Result<f64, SolverError> {
    let dx_sq = x0.dist_sq(x1);
    if dx_sq == 0.0 {
        return Err(SolverError::InvalidState(
            "first-iteration curvature needs distinct query points",
        ));
    }
    let dg_sq = grad_diff_norm_sq(g0, g1);
    let quarter = epsilon / 4.0;
    Ok(dg_sq / ((dx_sq * dg_sq + quarter * quarter).sqrt() + quarter))
}

/// Accuracy-relaxed curvature for iterations `t >= 2`:
/// `||g_cur - g_prev||^2 / (2 B + eps / tau)`.
///
/// Unlike the smooth estimate this stays positive at `B = 0` whenever the
/// gradients differ, which is what lets nonsmooth objectives through.
pub fn curvature_hoelder(
    epsilon: f64,
    tau: f64,
    f_prev: f64,
    f_cur: f64,
    g_prev: &DenseVector,
    g_cur: &DenseVector,
    x_prev: &DenseVector,
    x_cur: &DenseVector,
) -> f64 {
    debug_assert!(tau > 0.0, "hoelder curvature needs tau > 0");
    let b = bracket(f_prev, f_cur, g_cur, x_prev, x_cur);
    let denom = 2.0 * b + epsilon / tau;
    let num = grad_diff_norm_sq(g_prev, g_cur);
    if num == 0.0 {
        return 0.0;
    }
    num / denom
}

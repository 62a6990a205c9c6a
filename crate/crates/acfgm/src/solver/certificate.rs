//! Convergence certificates: closed-form optimality-gap bounds evaluated
//! with quantities realized by a run.
//!
//! The bounds need the distance from the start point to an optimal (or
//! reference) solution, which the caller supplies; everything else comes
//! out of the solver state. In relaxed mode only the averaged iterate
//! carries a bound, and it includes the additive `epsilon / 2` term.

use crate::solver::policy::PolicyKind;

/// Everything a certificate evaluation consumes.
#[derive(Debug, Clone)]
pub struct CertificateInputs {
    pub policy: PolicyKind,
    /// Completed iterations.
    pub k: usize,
    pub beta: f64,
    pub eta1: f64,
    pub eta2: f64,
    /// First-iteration curvature (the relaxed estimate in relaxed mode).
    pub l1: f64,
    /// Running curvature max including the `1/(4(1-beta) eta_1)` floor.
    pub hat_l: f64,
    /// `||z_0 - x*||^2`, or a caller-supplied surrogate.
    pub dist0_sq: f64,
    /// `||z_1 - z_0||^2`.
    pub z1_dist_sq: f64,
    /// Realized `sum_{t=2}^{k+1} eta_t`.
    pub sum_eta: f64,
    /// Realized `sum_{t=1}^{k} (3 + alpha (t-2)) / hat_l_t`.
    pub weight_sum: f64,
}

/// Gap bounds for the last and the averaged iterate.
#[derive(Debug, Clone)]
pub struct Certificate {
    /// Bound on `Psi(x_k) - Psi*`; absent in relaxed mode, where the last
    /// iterate carries no guarantee.
    pub last_iterate_bound: Option<f64>,
    /// Bound on `Psi(xbar_k) - Psi*`; absent for relaxed runs with
    /// `alpha = 0`, which the adaptive-schedule argument does not cover.
    pub avg_iterate_bound: Option<f64>,
    pub inputs: CertificateInputs,
}

/// The common bracket `dist^2 / beta + eta_2 (5 L_1 / 2 - 1/eta_1) ||z_1
/// - z_0||^2`, with a nonpositive second term dropped (dropping it only
/// loosens the bound).
fn bracket(inputs: &CertificateInputs) -> f64 {
    let extra = inputs.eta2 * (2.5 * inputs.l1 - 1.0 / inputs.eta1);
    inputs.dist0_sq / inputs.beta + extra.max(0.0) * inputs.z1_dist_sq
}

pub fn evaluate_certificate(inputs: CertificateInputs) -> Certificate {
    let b = bracket(&inputs);
    let k = inputs.k as f64;
    let (last, avg) = match inputs.policy {
        PolicyKind::Simple => {
            let last = 12.0 * inputs.hat_l / (k * (k + 1.0)) * b;
            let avg = 6.0 / inputs.weight_sum * b;
            (Some(last), Some(avg))
        }
        PolicyKind::Adaptive { alpha } => {
            let last =
                12.0 * inputs.hat_l / ((alpha * k + 4.0 - 2.0 * alpha) * (alpha * k + 3.0 - 2.0 * alpha))
                    * b;
            let avg = 6.0 / inputs.weight_sum * b;
            (Some(last), Some(avg))
        }
        PolicyKind::Hoelder { epsilon, alpha } => {
            let avg = if alpha > 0.0 {
                Some(0.5 * b / inputs.sum_eta + epsilon / 2.0)
            } else {
                None
            };
            (None, avg)
        }
    };
    debug_assert!(last.map_or(true, |v| v.is_finite() && v >= 0.0));
    debug_assert!(avg.map_or(true, |v| v.is_finite() && v >= 0.0));
    Certificate {
        last_iterate_bound: last,
        avg_iterate_bound: avg,
        inputs,
    }
}

//! Stepsize policies and schedule validation.
//!
//! Two rules drive the solver. The simple rule fixes the averaging weight
//! at `tau_t = t/2` and grows the stepsize by `t/(t-1)` per iteration,
//! capped by the last curvature estimate. The adaptive rule lets `tau`
//! respond to how tight the curvature cap is, trading worst-case growth
//! for responsiveness; with `alpha = 1` it reproduces the simple rule
//! exactly. Accuracy-relaxed (Hölder) runs reuse either rule with the
//! relaxed curvature estimates substituted in.

use crate::solver::SolverError;

/// Largest admissible prox-center mixing weight, `1 - sqrt(6)/3`.
pub fn max_beta() -> f64 {
    1.0 - 6.0_f64.sqrt() / 3.0
}

/// Default mixing weight; the largest admissible value.
pub fn default_beta() -> f64 {
    max_beta()
}

/// Stepsize policy selection.
#[derive(Debug, Clone, PartialEq)]
pub enum PolicyKind {
    /// Fixed averaging weights `tau_t = t/2`.
    Simple,
    /// Curvature-coupled weights; `alpha` in `[0, 1]` trades worst-case
    /// growth (`alpha = 1`) for local adaptivity (`alpha = 0`).
    Adaptive { alpha: f64 },
    /// Accuracy-relaxed mode for objectives that need not be smooth;
    /// `epsilon` is the target accuracy folded into the curvature
    /// estimates, `alpha` selects the underlying schedule as above.
    Hoelder { epsilon: f64, alpha: f64 },
}

impl PolicyKind {
    /// Relaxed mode with the simple schedule.
    pub fn hoelder(epsilon: f64) -> Self {
        PolicyKind::Hoelder {
            epsilon,
            alpha: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        match *self {
            PolicyKind::Simple => Ok(()),
            PolicyKind::Adaptive { alpha } | PolicyKind::Hoelder { alpha, .. } => {
                if !(0.0..=1.0).contains(&alpha) || !alpha.is_finite() {
                    return Err(SolverError::Config(format!(
                        "alpha must lie in [0, 1], got {alpha}"
                    )));
                }
                if let PolicyKind::Hoelder { epsilon, .. } = *self {
                    if !(epsilon > 0.0) || !epsilon.is_finite() {
                        return Err(SolverError::Config(format!(
                            "target accuracy must be positive, got {epsilon}"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn epsilon(&self) -> Option<f64> {
        match *self {
            PolicyKind::Hoelder { epsilon, .. } => Some(epsilon),
            _ => None,
        }
    }

    /// The `alpha` governing the schedule recursions (`1` for `Simple`).
    pub(crate) fn schedule_alpha(&self) -> f64 {
        match *self {
            PolicyKind::Simple => 1.0,
            PolicyKind::Adaptive { alpha } | PolicyKind::Hoelder { alpha, .. } => alpha,
        }
    }
}

pub fn validate_beta(beta: f64) -> Result<(), SolverError> {
    if !(beta > 0.0 && beta <= max_beta()) {
        return Err(SolverError::Config(format!(
            "beta must lie in (0, {:.6}], got {beta}",
            max_beta()
        )));
    }
    Ok(())
}

/// `a / b` under the convention `a / 0 = +inf` for `a > 0`.
#[inline]
pub(crate) fn cap_div(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else {
        f64::INFINITY
    }
}

/// Parameters `(eta_t, tau_t)` of the simple rule.
///
/// `t >= 2`; `eta_prev` is `eta_{t-1}` and `l_prev` the curvature estimate
/// from iteration `t-1`. Divisions by a zero curvature follow the
/// `a/0 = +inf` convention, so the growth branch binds.
pub fn stepsize_simple(t: usize, eta1: f64, eta_prev: f64, l_prev: f64, beta: f64) -> (f64, f64) {
    debug_assert!(t >= 2);
    let eta = match t {
        2 => ((1.0 - beta) * eta1).min(cap_div(1.0, 4.0 * l_prev)),
        3 => eta_prev.min(cap_div(1.0, 4.0 * l_prev)),
        _ => {
            let tf = t as f64;
            (tf / (tf - 1.0) * eta_prev).min(cap_div(tf - 1.0, 8.0 * l_prev))
        }
    };
    (eta, t as f64 / 2.0)
}

/// Parameters `(eta_t, tau_t)` of the adaptive rule.
///
/// `tau_prev` and `tau_prev2` are `tau_{t-1}` and `tau_{t-2}`; the latter
/// is ignored at `t = 2`. A zero curvature estimate disables the
/// curvature branch and contributes nothing to the `tau` increment.
pub fn stepsize_adaptive(
    t: usize,
    alpha: f64,
    eta1: f64,
    eta_prev: f64,
    tau_prev: f64,
    tau_prev2: f64,
    l_prev: f64,
    beta: f64,
) -> (f64, f64) {
    debug_assert!(t >= 2);
    if t == 2 {
        let eta = ((1.0 - beta) * eta1).min(cap_div(1.0, 4.0 * l_prev));
        return (eta, 1.0);
    }
    let eta = (4.0 / 3.0 * eta_prev)
        .min((tau_prev2 + 1.0) / tau_prev * eta_prev)
        .min(cap_div(tau_prev, 4.0 * l_prev));
    let tau = tau_prev + alpha / 2.0 + 2.0 * (1.0 - alpha) * eta * l_prev / tau_prev;
    (eta, tau)
}

/// One completed iteration, as recorded by the solver: the parameters it
/// ran with, the curvature it measured, and the running curvature max.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub eta: f64,
    pub tau: f64,
    pub curvature: f64,
    pub hat_l: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleCondition {
    /// `tau_1` must be zero.
    TauStartsAtZero,
    /// `eta_2 <= min{(1-beta) eta_1, 1/(4 L_1)}`.
    SecondStepsize,
    /// `eta_t <= 2 (1-beta)^2 eta_{t-1}`.
    GrowthCap,
    /// `eta_t <= tau_{t-1} / (4 L_{t-1})`.
    CurvatureCap,
    /// `eta_t <= (tau_{t-2} + 1) / tau_{t-1} * eta_{t-1}`.
    WeightRatioCap,
}

impl std::fmt::Display for ScheduleCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ScheduleCondition::TauStartsAtZero => "tau_1 = 0",
            ScheduleCondition::SecondStepsize => "eta_2 <= min{(1-beta) eta_1, 1/(4 L_1)}",
            ScheduleCondition::GrowthCap => "eta_t <= 2 (1-beta)^2 eta_{t-1}",
            ScheduleCondition::CurvatureCap => "eta_t <= tau_{t-1}/(4 L_{t-1})",
            ScheduleCondition::WeightRatioCap => "eta_t <= (tau_{t-2}+1)/tau_{t-1} eta_{t-1}",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleViolation {
    /// 1-based iteration index the violated condition applies to.
    pub iteration: usize,
    pub condition: ScheduleCondition,
    pub eta: f64,
    pub bound: f64,
}

/// Relative slack for the schedule checks. The admissibility conditions
/// hold with equality on some branches (e.g. `2(1-beta)^2 = 4/3` at the
/// default `beta`), so a few ulps of drift must not count as violations.
const SCHEDULE_SLACK: f64 = 1e-12;

/// Diagnostic check that a recorded run respects the stepsize
/// admissibility conditions. Returns an empty list for conforming runs.
///
/// In accuracy-relaxed runs the records carry the relaxed curvature
/// estimates, so the same checks apply unchanged.
pub fn validate_schedule(history: &[IterationRecord], beta: f64) -> Vec<ScheduleViolation> {
    let mut violations = Vec::new();
    if history.is_empty() {
        return violations;
    }
    if history[0].tau != 0.0 {
        violations.push(ScheduleViolation {
            iteration: 1,
            condition: ScheduleCondition::TauStartsAtZero,
            eta: history[0].tau,
            bound: 0.0,
        });
    }
    let within = |eta: f64, bound: f64| eta <= bound * (1.0 + SCHEDULE_SLACK);
    if history.len() >= 2 {
        let bound = ((1.0 - beta) * history[0].eta).min(cap_div(1.0, 4.0 * history[0].curvature));
        if !within(history[1].eta, bound) {
            violations.push(ScheduleViolation {
                iteration: 2,
                condition: ScheduleCondition::SecondStepsize,
                eta: history[1].eta,
                bound,
            });
        }
    }
    for t in 3..=history.len() {
        let cur = &history[t - 1];
        let prev = &history[t - 2];
        let prev2 = &history[t - 3];
        let checks = [
            (
                ScheduleCondition::GrowthCap,
                2.0 * (1.0 - beta) * (1.0 - beta) * prev.eta,
            ),
            (
                ScheduleCondition::CurvatureCap,
                cap_div(prev.tau, 4.0 * prev.curvature),
            ),
            (
                ScheduleCondition::WeightRatioCap,
                (prev2.tau + 1.0) / prev.tau * prev.eta,
            ),
        ];
        for (condition, bound) in checks {
            if !within(cur.eta, bound) {
                violations.push(ScheduleViolation {
                    iteration: t,
                    condition,
                    eta: cur.eta,
                    bound,
                });
            }
        }
    }
    violations
}

#[cfg(test)]
mod tests {
    use super::*;

    const BETA: f64 = 0.18350341907227397; // 1 - sqrt(6)/3

    #[test]
    fn beta_default_is_max() {
        assert!((default_beta() - BETA).abs() < 1e-15);
        assert!(validate_beta(default_beta()).is_ok());
        assert!(validate_beta(0.5).is_err());
        assert!(validate_beta(0.0).is_err());
        assert!(validate_beta(-0.1).is_err());
    }

    #[test]
    fn simple_second_step() {
        // eta_1 = 0.4, L_1 = 1: min{(1-beta) 0.4, 0.25} = 0.25
        let (eta, tau) = stepsize_simple(2, 0.4, 0.4, 1.0, BETA);
        assert_eq!(eta, 0.25);
        assert_eq!(tau, 1.0);
    }

    #[test]
    fn simple_zero_curvature_keeps_previous() {
        let (eta, tau) = stepsize_simple(3, 0.4, 0.25, 0.0, BETA);
        assert_eq!(eta, 0.25);
        assert_eq!(tau, 1.5);
    }

    #[test]
    fn simple_growth_step() {
        // t = 4, eta_3 = 0.25, L_3 = 1: min{4/3 * 0.25, 3/8} = 1/3
        let (eta, tau) = stepsize_simple(4, 0.4, 0.25, 1.0, BETA);
        assert!((eta - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(tau, 2.0);
    }

    #[test]
    fn adaptive_matches_simple_at_alpha_one() {
        // same inputs, both rules, several iterations
        let mut eta_s = 0.4;
        let mut eta_a = 0.4;
        let mut tau_a = 0.0;
        let mut tau_a2 = 0.0;
        let ls = [1.0, 0.7, 1.3, 0.2, 2.5, 0.9];
        for t in 2..=7 {
            let l = ls[t - 2];
            let (es, _ts) = stepsize_simple(t, 0.4, eta_s, l, BETA);
            let (ea, ta) = stepsize_adaptive(t, 1.0, 0.4, eta_a, tau_a, tau_a2, l, BETA);
            assert_eq!(es, ea, "eta mismatch at t={t}");
            assert_eq!(ta, t as f64 / 2.0, "tau mismatch at t={t}");
            eta_s = es;
            eta_a = ea;
            tau_a2 = tau_a;
            tau_a = ta;
        }
    }

    #[test]
    fn adaptive_example_at_alpha_zero() {
        // t=3, alpha=0, eta_2=0.25, tau_2=1, tau_1=0, L_2=1
        let (eta, tau) = stepsize_adaptive(3, 0.0, 0.4, 0.25, 1.0, 0.0, 1.0, BETA);
        assert_eq!(eta, 0.25);
        assert_eq!(tau, 1.5);
    }

    #[test]
    fn adaptive_zero_curvature_increments_tau_by_half_alpha() {
        let alpha = 0.3;
        let (eta, tau) = stepsize_adaptive(4, alpha, 0.4, 0.25, 1.5, 1.0, 0.0, BETA);
        // curvature branch inactive, ratio branch: (1+1)/1.5 * 0.25 = 1/3
        assert!((eta - 0.25 * (4.0 / 3.0)).abs() < 1e-15);
        assert_eq!(tau, 1.5 + alpha / 2.0);
    }

    fn record(eta: f64, tau: f64, l: f64) -> IterationRecord {
        IterationRecord {
            eta,
            tau,
            curvature: l,
            hat_l: l,
        }
    }

    #[test]
    fn validate_accepts_generated_schedule() {
        // run the simple recursion and validate its own output
        let mut history = vec![record(0.4, 0.0, 1.0)];
        let mut eta = 0.4;
        for t in 2..40 {
            let l_prev = history.last().unwrap().curvature;
            let (e, tau) = stepsize_simple(t, 0.4, eta, l_prev, BETA);
            history.push(record(e, tau, 0.5 + 1.3 * ((t % 5) as f64)));
            eta = e;
        }
        assert!(validate_schedule(&history, BETA).is_empty());
    }

    #[test]
    fn validate_flags_inflated_stepsize() {
        let mut history = vec![record(0.4, 0.0, 1.0)];
        let mut eta = 0.4;
        for t in 2..10 {
            let l_prev = history.last().unwrap().curvature;
            let (e, tau) = stepsize_simple(t, 0.4, eta, l_prev, BETA);
            history.push(record(e, tau, 1.0));
            eta = e;
        }
        history[4].eta *= 2.0; // t = 5
        let violations = validate_schedule(&history, BETA);
        assert!(!violations.is_empty());
        assert!(violations.iter().all(|v| v.iteration == 5 || v.iteration == 6));
        assert!(violations.iter().any(|v| v.iteration == 5));
    }

    #[test]
    fn validate_flags_nonzero_initial_tau() {
        let history = vec![record(0.4, 0.5, 1.0)];
        let violations = validate_schedule(&history, BETA);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].condition, ScheduleCondition::TauStartsAtZero);
    }
}

//! Initial stepsize selection.
//!
//! The default strategy probes the oracle once at a perturbation of the
//! start point and sets `eta_1 = scale / L_0` from the secant curvature
//! `L_0` of the probe pair, keeping the whole run free of line search.
//! The alternative performs a backtracking search in the first iteration
//! only, which also hands the solver a completed first iterate.

use crate::linalg::DenseVector;
use crate::problem::CompositeProblem;
use crate::prox::prox_step;
use crate::solver::curvature::curvature_hoelder_first;
use crate::solver::SolverError;

/// Smallest admissible probe curvature; used when the oracle looks flat
/// in every probe direction tried.
pub const CURVATURE_FLOOR: f64 = 1e-12;

/// How the first stepsize is chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum InitStrategy {
    /// `eta_1 = scale / L_0` with `L_0` the secant curvature between the
    /// start point and a probe. A `None` probe means "perturb the start
    /// point by `1e-2 * max(||z_0||, 1)` along the first coordinate".
    FromL0 {
        probe: Option<DenseVector>,
        scale: f64,
    },
    /// Backtracking in the first iteration only: shrink trial stepsizes
    /// `1 / (4 (1-beta) L_0 gamma^i)` until the realized first-iteration
    /// curvature accepts the trial. Returns the accepted first iterate.
    FirstIterLineSearch {
        probe: Option<DenseVector>,
        gamma: f64,
    },
    /// Caller-supplied `eta_1`.
    Explicit { eta1: f64 },
}

impl Default for InitStrategy {
    fn default() -> Self {
        InitStrategy::FromL0 {
            probe: None,
            scale: 0.4,
        }
    }
}

impl InitStrategy {
    pub fn validate(&self) -> Result<(), SolverError> {
        match self {
            InitStrategy::FromL0 { scale, .. } => {
                if !(scale.is_finite() && *scale > 0.0) {
                    return Err(SolverError::Config(format!(
                        "initial stepsize scale must be positive, got {scale}"
                    )));
                }
            }
            InitStrategy::FirstIterLineSearch { gamma, .. } => {
                if !(gamma.is_finite() && *gamma > 1.0) {
                    return Err(SolverError::Config(format!(
                        "line search ratio must exceed 1, got {gamma}"
                    )));
                }
            }
            InitStrategy::Explicit { eta1 } => {
                if !(eta1.is_finite() && *eta1 > 0.0) {
                    return Err(SolverError::Config(format!(
                        "explicit initial stepsize must be positive, got {eta1}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A first iteration completed inside the line search.
#[derive(Debug, Clone)]
pub(crate) struct FirstIteration {
    pub z1: DenseVector,
    pub f1: f64,
    pub g1: DenseVector,
    pub l1: f64,
    pub trials: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct InitOutcome {
    pub eta1: f64,
    /// Probe curvature after any fallback, `0` for `Explicit`.
    pub l0: f64,
    /// Oracle calls spent here, excluding the start-point evaluation.
    pub extra_oracle_calls: u64,
    pub first_iteration: Option<FirstIteration>,
}

/// Secant curvature of a probe pair; in relaxed mode the accuracy-folded
/// variant. Zero when the gradients coincide.
fn probe_curvature(
    z0: &DenseVector,
    g0: &DenseVector,
    probe: &DenseVector,
    g_probe: &DenseVector,
    epsilon: Option<f64>,
) -> f64 {
    match epsilon {
        None => g0.dist(g_probe) / z0.dist(probe),
        // never errors: callers guarantee probe != z0
        Some(eps) => curvature_hoelder_first(z0, probe, g0, g_probe, eps).unwrap_or(0.0),
    }
}

/// Estimate `L_0` from a probe point, retrying with 10x larger
/// perturbations (up to three times) when the oracle looks flat, and
/// falling back to [`CURVATURE_FLOOR`] if it still does.
fn estimate_l0(
    problem: &CompositeProblem,
    z0: &DenseVector,
    g0: &DenseVector,
    probe: &Option<DenseVector>,
    epsilon: Option<f64>,
    calls: &mut u64,
) -> Result<f64, SolverError> {
    let offset = match probe {
        Some(p) => {
            if p.len() != z0.len() {
                return Err(SolverError::Config(format!(
                    "probe dimension {} does not match problem dimension {}",
                    p.len(),
                    z0.len()
                )));
            }
            let offset = p.sub(z0);
            if offset.norm() == 0.0 {
                return Err(SolverError::Config(
                    "probe point must differ from the start point".into(),
                ));
            }
            offset
        }
        None => {
            let delta = 1e-2 * z0.norm().max(1.0);
            let mut e = DenseVector::zeros(z0.len());
            e.add_scaled(delta, &DenseVector::from_fn(z0.len(), |i| f64::from(i == 0)).unwrap());
            e
        }
    };
    let mut magnify = 1.0;
    for _ in 0..4 {
        let candidate = DenseVector::combined(1.0, z0, magnify, &offset);
        let (_, g_probe) = problem.eval(&candidate);
        *calls += 1;
        let l0 = probe_curvature(z0, g0, &candidate, &g_probe, epsilon);
        if l0 > 0.0 {
            return Ok(l0);
        }
        magnify *= 10.0;
    }
    Ok(CURVATURE_FLOOR)
}

/// Determine `eta_1` (and, for the line search strategy, the entire first
/// iteration). The start-point evaluation `g0` is assumed already paid
/// for; `extra_oracle_calls` counts everything spent here.
pub(crate) fn initial_stepsize(
    strategy: &InitStrategy,
    problem: &CompositeProblem,
    z0: &DenseVector,
    f0: f64,
    g0: &DenseVector,
    beta: f64,
    epsilon: Option<f64>,
    max_trials: usize,
) -> Result<InitOutcome, SolverError> {
    strategy.validate()?;
    let mut calls = 0u64;
    match strategy {
        InitStrategy::Explicit { eta1 } => Ok(InitOutcome {
            eta1: *eta1,
            l0: 0.0,
            extra_oracle_calls: 0,
            first_iteration: None,
        }),
        InitStrategy::FromL0 { probe, scale } => {
            let l0 = estimate_l0(problem, z0, g0, probe, epsilon, &mut calls)?;
            Ok(InitOutcome {
                eta1: scale / l0,
                l0,
                extra_oracle_calls: calls,
                first_iteration: None,
            })
        }
        InitStrategy::FirstIterLineSearch { probe, gamma } => {
            let l0 = estimate_l0(problem, z0, g0, probe, epsilon, &mut calls)?;
            let mut eta = 1.0 / (4.0 * (1.0 - beta) * l0);
            for trial in 1.. {
                if trial > max_trials {
                    return Err(SolverError::LineSearchExhausted { trials: trial - 1 });
                }
                let z1 = prox_step(problem.prox_term(), z0, g0, eta)
                    .map_err(|e| SolverError::Config(e.to_string()))?;
                if z1 == *z0 {
                    // prox fixed point: the start is already optimal; any
                    // stepsize is acceptable and the first iterate is z0
                    return Ok(InitOutcome {
                        eta1: eta,
                        l0,
                        extra_oracle_calls: calls,
                        first_iteration: Some(FirstIteration {
                            z1,
                            f1: f0,
                            g1: g0.clone(),
                            l1: 0.0,
                            trials: trial - 1,
                        }),
                    });
                }
                let (f1, g1) = problem.eval(&z1);
                calls += 1;
                let l1 = if epsilon.is_some() {
                    curvature_hoelder_first(z0, &z1, g0, &g1, epsilon.unwrap())?
                } else {
                    g0.dist(&g1) / z0.dist(&z1)
                };
                let accept = if l1 > 0.0 { eta <= 2.0 / (5.0 * l1) } else { true };
                if accept {
                    return Ok(InitOutcome {
                        eta1: eta,
                        l0,
                        extra_oracle_calls: calls,
                        first_iteration: Some(FirstIteration {
                            z1,
                            f1,
                            g1,
                            l1,
                            trials: trial,
                        }),
                    });
                }
                eta /= gamma;
            }
            unreachable!()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prox::ProxTerm;

    fn half_square() -> CompositeProblem {
        CompositeProblem::new(1, ProxTerm::Zero, |x| (0.5 * x[0] * x[0], x.clone()))
    }

    fn dv(v: &[f64]) -> DenseVector {
        DenseVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn from_l0_on_quadratic() {
        // f(x) = x^2/2, z0 = 1, probe 0.5: L_0 = 1, eta_1 = 0.4
        let p = half_square();
        let z0 = dv(&[1.0]);
        let strategy = InitStrategy::FromL0 {
            probe: Some(dv(&[0.5])),
            scale: 0.4,
        };
        let out = initial_stepsize(&strategy, &p, &z0, 0.5, &dv(&[1.0]), 0.1835, None, 60).unwrap();
        assert!((out.l0 - 1.0).abs() < 1e-14);
        assert!((out.eta1 - 0.4).abs() < 1e-14);
        assert_eq!(out.extra_oracle_calls, 1);
        assert!(out.first_iteration.is_none());
    }

    #[test]
    fn from_l0_flat_oracle_falls_back_to_floor() {
        // linear f: gradient difference is zero for every probe
        let p = CompositeProblem::new(1, ProxTerm::Zero, |_| (0.0, dv(&[2.0])));
        let strategy = InitStrategy::FromL0 {
            probe: None,
            scale: 0.4,
        };
        let out = initial_stepsize(&strategy, &p, &dv(&[1.0]), 0.0, &dv(&[2.0]), 0.1835, None, 60)
            .unwrap();
        assert_eq!(out.l0, CURVATURE_FLOOR);
        assert_eq!(out.eta1, 0.4 / CURVATURE_FLOOR);
        // initial probe plus three retries
        assert_eq!(out.extra_oracle_calls, 4);
    }

    #[test]
    fn probe_equal_to_start_is_rejected() {
        let p = half_square();
        let z0 = dv(&[1.0]);
        let strategy = InitStrategy::FromL0 {
            probe: Some(z0.clone()),
            scale: 0.4,
        };
        assert!(matches!(
            initial_stepsize(&strategy, &p, &z0, 0.5, &dv(&[1.0]), 0.1835, None, 60),
            Err(SolverError::Config(_))
        ));
    }

    #[test]
    fn line_search_accepts_first_trial_on_quadratic() {
        // beta = 1 - sqrt(6)/3, gamma = 2, L_0 = 1: trial stepsize
        // 1/(4(1-beta)) ~ 0.3062 <= 2/5 passes immediately
        let p = half_square();
        let beta = 1.0 - 6.0f64.sqrt() / 3.0;
        let strategy = InitStrategy::FirstIterLineSearch {
            probe: Some(dv(&[0.5])),
            gamma: 2.0,
        };
        let z0 = dv(&[1.0]);
        let out = initial_stepsize(&strategy, &p, &z0, 0.5, &dv(&[1.0]), beta, None, 60).unwrap();
        let expected = 1.0 / (4.0 * (1.0 - beta));
        assert!((out.eta1 - expected).abs() < 1e-12);
        assert!((out.eta1 - 0.3062).abs() < 1e-3);
        let first = out.first_iteration.unwrap();
        assert_eq!(first.trials, 1);
        assert!((first.l1 - 1.0).abs() < 1e-12);
        assert!((first.z1[0] - (1.0 - out.eta1)).abs() < 1e-15);
        // probe + one trial
        assert_eq!(out.extra_oracle_calls, 2);
    }

    #[test]
    fn line_search_trial_cap_reports_divergence() {
        let p = half_square();
        let strategy = InitStrategy::FirstIterLineSearch {
            probe: Some(dv(&[0.5])),
            gamma: 2.0,
        };
        // a cap of zero trials can never accept
        let err = initial_stepsize(&strategy, &p, &dv(&[1.0]), 0.5, &dv(&[1.0]), 0.1835, None, 0)
            .unwrap_err();
        assert!(matches!(err, SolverError::LineSearchExhausted { .. }));
    }

    #[test]
    fn explicit_passthrough() {
        let p = half_square();
        let out = initial_stepsize(
            &InitStrategy::Explicit { eta1: 0.7 },
            &p,
            &dv(&[1.0]),
            0.5,
            &dv(&[1.0]),
            0.1835,
            None,
            60,
        )
        .unwrap();
        assert_eq!(out.eta1, 0.7);
        assert_eq!(out.extra_oracle_calls, 0);
    }
}

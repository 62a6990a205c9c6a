//! Adaptive proximal gradient descent (AdGD).
//!
//! Recursion implemented here, for start point `x_0` with gradient `g_0`:
//!
//! ```text
//! x_{k+1} = prox_{lambda_k h}(x_k - lambda_k g(x_k))
//! L_k     = ||g(x_k) - g(x_{k-1})|| / ||x_k - x_{k-1}||      (0 on 0/0)
//! lambda_k = min{ sqrt(1 + theta_{k-1}) lambda_{k-1}, 1 / (2 L_k) }
//! theta_k = lambda_k / lambda_{k-1},        theta_0 = 1
//! ```
//!
//! `lambda_0` comes from a one-off initial search: trials
//! `lambda = 1 / (L_0 gamma^i)` (default `gamma = 1.5`, `L_0` from the
//! shared curvature probe) are shrunk until the realized curvature of the
//! candidate step accepts `lambda <= 1 / (2 L)`. The search is charged to
//! initialization; every iteration afterwards costs exactly one oracle
//! call.

use super::probe_curvature;
use crate::linalg::DenseVector;
use crate::problem::CompositeProblem;
use crate::prox::prox_step;
use crate::solver::{check_oracle_output, SolverError, StepOutcome};

#[derive(Debug, Clone)]
pub struct AdGdConfig {
    /// Initial-search shrink ratio.
    pub gamma: f64,
    pub max_init_trials: usize,
}

impl Default for AdGdConfig {
    fn default() -> Self {
        Self {
            gamma: 1.5,
            max_init_trials: super::DEFAULT_MAX_TRIALS,
        }
    }
}

#[derive(Debug)]
pub struct AdGd {
    iteration: usize,
    x: DenseVector,
    f: f64,
    g: DenseVector,
    x_prev: DenseVector,
    g_prev: DenseVector,
    lambda: f64,
    lambda_prev: f64,
    l_last: f64,
    oracle_calls: u64,
    init_oracle_calls: u64,
    stationary: bool,
}

impl AdGd {
    pub fn init(
        problem: &CompositeProblem,
        x0: DenseVector,
        config: &AdGdConfig,
    ) -> Result<Self, SolverError> {
        if !(config.gamma > 1.0) {
            return Err(SolverError::Config(format!(
                "line search ratio must exceed 1, got {}",
                config.gamma
            )));
        }
        let (f0, g0) = problem.eval(&x0);
        let mut calls = 1u64;
        check_oracle_output(f0, &g0, problem.dimension(), 0)?;
        let l0 = probe_curvature(problem, &x0, &g0, &mut calls);

        // search the initial stepsize: shrink until the realized local
        // curvature of the candidate step accepts it
        let mut lambda = 1.0 / l0;
        let mut accepted = false;
        for _ in 0..config.max_init_trials {
            let candidate = prox_step(problem.prox_term(), &x0, &g0, lambda)
                .map_err(|e| SolverError::Config(e.to_string()))?;
            if candidate == x0 {
                // prox fixed point: the start is optimal; any stepsize works
                accepted = true;
                break;
            }
            let (_, g_cand) = problem.eval(&candidate);
            calls += 1;
            let l_cand = g0.dist(&g_cand) / x0.dist(&candidate);
            if l_cand == 0.0 || lambda <= 1.0 / (2.0 * l_cand) {
                accepted = true;
                break;
            }
            lambda /= config.gamma;
        }
        if !accepted {
            return Err(SolverError::LineSearchExhausted {
                trials: config.max_init_trials,
            });
        }

        Ok(Self {
            iteration: 0,
            x_prev: x0.clone(),
            g_prev: g0.clone(),
            x: x0,
            f: f0,
            g: g0,
            lambda,
            lambda_prev: lambda,
            l_last: l0,
            oracle_calls: calls,
            init_oracle_calls: calls,
            stationary: false,
        })
    }

    pub fn step(&mut self, problem: &CompositeProblem) -> Result<StepOutcome, SolverError> {
        if self.stationary {
            return Ok(StepOutcome::Stationary);
        }
        let k = self.iteration + 1;
        if k > 1 {
            let dx = self.x.dist(&self.x_prev);
            let l = if dx == 0.0 {
                0.0
            } else {
                self.g.dist(&self.g_prev) / dx
            };
            let growth = (1.0 + self.lambda / self.lambda_prev).sqrt() * self.lambda;
            let cap = if l > 0.0 { 1.0 / (2.0 * l) } else { f64::INFINITY };
            self.lambda_prev = self.lambda;
            self.lambda = growth.min(cap);
            self.l_last = l;
        }
        let x_new = prox_step(problem.prox_term(), &self.x, &self.g, self.lambda)
            .map_err(|e| SolverError::Config(e.to_string()))?;
        if x_new == self.x {
            self.stationary = true;
            return Ok(StepOutcome::Stationary);
        }
        let (f_new, g_new) = problem.eval(&x_new);
        self.oracle_calls += 1;
        check_oracle_output(f_new, &g_new, problem.dimension(), k)?;
        self.x_prev = std::mem::replace(&mut self.x, x_new);
        self.g_prev = std::mem::replace(&mut self.g, g_new);
        self.f = f_new;
        self.iteration = k;
        Ok(StepOutcome::Progressed)
    }

    pub fn stepsize(&self) -> f64 {
        self.lambda
    }

    pub fn local_curvature(&self) -> f64 {
        self.l_last
    }

    pub fn current_point(&self) -> &DenseVector {
        &self.x
    }
}

impl crate::driver::FirstOrderSolver for AdGd {
    fn step(&mut self, problem: &CompositeProblem) -> Result<StepOutcome, SolverError> {
        AdGd::step(self, problem)
    }

    fn iteration(&self) -> usize {
        self.iteration
    }

    fn oracle_calls(&self) -> u64 {
        self.oracle_calls
    }

    fn init_oracle_calls(&self) -> u64 {
        self.init_oracle_calls
    }

    fn solution(&self) -> DenseVector {
        self.x.clone()
    }

    fn objective(&self, problem: &CompositeProblem) -> f64 {
        self.f + problem.prox_value(&self.x)
    }

    fn stepsize(&self) -> Option<f64> {
        Some(self.lambda)
    }

    fn local_curvature(&self) -> Option<f64> {
        (self.iteration > 1).then_some(self.l_last)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prox::ProxTerm;

    fn quadratic(l: f64) -> CompositeProblem {
        CompositeProblem::new(1, ProxTerm::Zero, move |x| {
            (0.5 * l * x[0] * x[0], x.scaled(l))
        })
    }

    #[test]
    fn stationary_start_is_fixed() {
        let p = quadratic(1.0);
        let mut s = AdGd::init(&p, DenseVector::zeros(1), &AdGdConfig::default()).unwrap();
        assert_eq!(s.step(&p).unwrap(), StepOutcome::Stationary);
        assert_eq!(s.current_point()[0], 0.0);
    }

    #[test]
    fn one_oracle_call_per_iteration() {
        let p = quadratic(3.0);
        let mut s = AdGd::init(&p, DenseVector::new(vec![2.0]).unwrap(), &AdGdConfig::default())
            .unwrap();
        let mut prev = s.oracle_calls;
        for _ in 0..25 {
            s.step(&p).unwrap();
            assert_eq!(s.oracle_calls - prev, 1);
            prev = s.oracle_calls;
        }
    }

    #[test]
    fn stepsize_settles_near_half_inverse_curvature() {
        // on f = L x^2 / 2 the local curvature is exactly L; after warmup
        // the cap 1/(2L) binds every iteration
        let l = 4.0;
        let p = quadratic(l);
        let mut s = AdGd::init(&p, DenseVector::new(vec![5.0]).unwrap(), &AdGdConfig::default())
            .unwrap();
        for _ in 0..10 {
            s.step(&p).unwrap();
        }
        for _ in 0..20 {
            s.step(&p).unwrap();
            let lam = s.stepsize();
            assert!(
                lam >= 0.4 / l && lam <= 0.6 / l,
                "stepsize {lam} left the steady band around 1/(2L)"
            );
        }
    }
}

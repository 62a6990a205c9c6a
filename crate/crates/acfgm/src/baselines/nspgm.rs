//! Universal primal gradient method (NS-PGM).
//!
//! Proximal gradient steps with backtracking on the relaxed descent
//! inequality. Each trial at curvature guess `M` runs:
//!
//! ```text
//! x+ = prox_{h/M}(x_k - g(x_k)/M)
//! accept iff f(x+) <= f(x_k) + <g(x_k), x+ - x_k> + M/2 ||x+ - x_k||^2
//!                     + eps / 2
//! ```
//!
//! A trial costs one oracle call (the evaluation at `x+`, whose gradient
//! is reused once the trial is accepted). Rejection multiplies `M` by
//! `gamma`, acceptance divides the next starting guess by `gamma`.

use super::probe_curvature;
use crate::linalg::DenseVector;
use crate::problem::CompositeProblem;
use crate::prox::prox_step;
use crate::solver::{check_oracle_output, SolverError, StepOutcome};

#[derive(Debug, Clone)]
pub struct NsPgmConfig {
    pub gamma: f64,
    pub epsilon: f64,
    pub max_trials: usize,
}

impl Default for NsPgmConfig {
    fn default() -> Self {
        Self {
            gamma: 2.0,
            epsilon: 1e-8,
            max_trials: super::DEFAULT_MAX_TRIALS,
        }
    }
}

#[derive(Debug)]
pub struct NsPgm {
    gamma: f64,
    epsilon: f64,
    max_trials: usize,

    iteration: usize,
    x: DenseVector,
    f: f64,
    g: DenseVector,
    l_guess: f64,

    last_m: f64,
    last_trials: usize,
    prev_point: Option<DenseVector>,

    oracle_calls: u64,
    init_oracle_calls: u64,
    stationary: bool,
}

impl NsPgm {
    pub fn init(
        problem: &CompositeProblem,
        x0: DenseVector,
        config: &NsPgmConfig,
    ) -> Result<Self, SolverError> {
        if !(config.gamma > 1.0) {
            return Err(SolverError::Config(format!(
                "line search ratio must exceed 1, got {}",
                config.gamma
            )));
        }
        if !(config.epsilon > 0.0) {
            return Err(SolverError::Config(format!(
                "target accuracy must be positive, got {}",
                config.epsilon
            )));
        }
        let (f0, g0) = problem.eval(&x0);
        let mut calls = 1u64;
        check_oracle_output(f0, &g0, problem.dimension(), 0)?;
        let l0 = probe_curvature(problem, &x0, &g0, &mut calls);
        Ok(Self {
            gamma: config.gamma,
            epsilon: config.epsilon,
            max_trials: config.max_trials,
            iteration: 0,
            x: x0,
            f: f0,
            g: g0,
            l_guess: l0,
            last_m: l0,
            last_trials: 0,
            prev_point: None,
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
        let mut m = self.l_guess;
        for trial in 1..=self.max_trials {
            let x_new = prox_step(problem.prox_term(), &self.x, &self.g, 1.0 / m)
                .map_err(|e| SolverError::Config(e.to_string()))?;
            if x_new == self.x {
                self.stationary = true;
                return Ok(StepOutcome::Stationary);
            }
            let (f_new, g_new) = problem.eval(&x_new);
            self.oracle_calls += 1;
            check_oracle_output(f_new, &g_new, problem.dimension(), k)?;
            let dx = x_new.sub(&self.x);
            let rhs = self.f + self.g.dot(&dx) + 0.5 * m * dx.norm_sq() + 0.5 * self.epsilon;
            if f_new <= rhs {
                self.prev_point = Some(std::mem::replace(&mut self.x, x_new));
                self.f = f_new;
                self.g = g_new;
                self.l_guess = m / self.gamma;
                self.last_m = m;
                self.last_trials = trial;
                self.iteration = k;
                return Ok(StepOutcome::Progressed);
            }
            m *= self.gamma;
        }
        Err(SolverError::Diverged {
            iteration: k,
            detail: format!(
                "universal acceptance failed after {} backtracking trials",
                self.max_trials
            ),
        })
    }

    pub fn last_accepted_m(&self) -> f64 {
        self.last_m
    }

    pub fn last_trials(&self) -> usize {
        self.last_trials
    }

    /// Point the last accepted step moved away from.
    pub fn previous_point(&self) -> Option<&DenseVector> {
        self.prev_point.as_ref()
    }

    pub fn current_point(&self) -> &DenseVector {
        &self.x
    }
}

impl crate::driver::FirstOrderSolver for NsPgm {
    fn step(&mut self, problem: &CompositeProblem) -> Result<StepOutcome, SolverError> {
        NsPgm::step(self, problem)
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
        (self.iteration > 0).then(|| 1.0 / self.last_m)
    }

    fn local_curvature(&self) -> Option<f64> {
        (self.iteration > 0).then_some(self.last_m)
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
    fn one_call_per_trial() {
        // anisotropic quadratic so the iterate never lands exactly on
        // the optimum and every step really backtracks
        let p = CompositeProblem::new(2, ProxTerm::Zero, |x| {
            (
                0.5 * (4.0 * x[0] * x[0] + 3.0 * x[1] * x[1]),
                DenseVector::new(vec![4.0 * x[0], 3.0 * x[1]]).unwrap(),
            )
        });
        let mut s = NsPgm::init(
            &p,
            DenseVector::new(vec![3.0, 2.0]).unwrap(),
            &NsPgmConfig::default(),
        )
        .unwrap();
        let mut prev = s.oracle_calls;
        for _ in 0..20 {
            assert_eq!(s.step(&p).unwrap(), StepOutcome::Progressed);
            assert_eq!(s.oracle_calls - prev, s.last_trials() as u64);
            prev = s.oracle_calls;
        }
    }

    #[test]
    fn exact_curvature_guess_reproduces_fixed_step_descent() {
        // with the guess pinned at L the first trial always accepts, so
        // the trajectory is exactly fixed-step proximal gradient descent
        let l = 4.0;
        let p = CompositeProblem::new(2, ProxTerm::Zero, |x| {
            (
                0.5 * (4.0 * x[0] * x[0] + x[1] * x[1]),
                DenseVector::new(vec![4.0 * x[0], x[1]]).unwrap(),
            )
        });
        let mut s = NsPgm::init(
            &p,
            DenseVector::new(vec![2.0, 2.0]).unwrap(),
            &NsPgmConfig::default(),
        )
        .unwrap();
        let mut reference = DenseVector::new(vec![2.0, 2.0]).unwrap();
        for _ in 0..30 {
            s.l_guess = l;
            s.step(&p).unwrap();
            assert_eq!(s.last_trials(), 1);
            let (_, g) = p.eval(&reference);
            reference.add_scaled(-1.0 / l, &g);
            assert!(s.current_point().dist(&reference) <= 1e-12);
        }
    }

    #[test]
    fn accepted_steps_satisfy_the_inequality() {
        let p = quadratic(7.0);
        let mut s = NsPgm::init(&p, DenseVector::new(vec![1.5]).unwrap(), &NsPgmConfig::default())
            .unwrap();
        for _ in 0..12 {
            s.step(&p).unwrap();
            let x_prev = s.previous_point().unwrap().clone();
            let (f_prev, g_prev) = p.eval(&x_prev);
            let x_new = s.current_point();
            let (f_new, _) = p.eval(x_new);
            let dx = x_new.sub(&x_prev);
            let m = s.last_accepted_m();
            let rhs = f_prev + g_prev.dot(&dx) + 0.5 * m * dx.norm_sq() + 0.5 * 1e-8;
            assert!(f_new <= rhs * (1.0 + 1e-12));
        }
    }

    #[test]
    fn stationary_start_is_fixed() {
        let p = quadratic(1.0);
        let mut s = NsPgm::init(&p, DenseVector::zeros(1), &NsPgmConfig::default()).unwrap();
        assert_eq!(s.step(&p).unwrap(), StepOutcome::Stationary);
    }
}

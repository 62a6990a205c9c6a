//! Accelerated gradient descent with a known Lipschitz constant (NS-AGD).
//!
//! Three-sequence scheme with the standard parameter choice
//! `q_t = alpha_t = 2/(t+1)` and prox stepsize `eta_t = t/(2L)`:
//!
//! ```text
//! x_t = (1 - q_t) y_{t-1} + q_t z_{t-1}
//! z_t = prox_{eta_t h}(z_{t-1} - eta_t g(x_t))
//! y_t = (1 - alpha_t) y_{t-1} + alpha_t z_t
//! ```
//!
//! One oracle call per iteration; `y_t` is the output sequence. With
//! `accelerated = false` the extrapolation is dropped and this becomes
//! plain proximal gradient descent with fixed step `1/L`, the
//! non-accelerated reference in the benchmark suite.

use crate::linalg::DenseVector;
use crate::problem::CompositeProblem;
use crate::prox::prox_step;
use crate::solver::{check_oracle_output, SolverError, StepOutcome};

#[derive(Debug, Clone)]
pub struct NsAgdConfig {
    /// Global Lipschitz constant of the smooth gradient.
    pub lipschitz: f64,
    /// `false` disables the extrapolation (plain fixed-step descent).
    pub accelerated: bool,
}

impl NsAgdConfig {
    pub fn new(lipschitz: f64) -> Self {
        Self {
            lipschitz,
            accelerated: true,
        }
    }
}

#[derive(Debug)]
pub struct NsAgd {
    lipschitz: f64,
    accelerated: bool,
    iteration: usize,
    y: DenseVector,
    z: DenseVector,
    last_eta: f64,
    oracle_calls: u64,
    stationary: bool,
}

impl NsAgd {
    pub fn init(
        problem: &CompositeProblem,
        x0: DenseVector,
        config: &NsAgdConfig,
    ) -> Result<Self, SolverError> {
        if !(config.lipschitz.is_finite() && config.lipschitz > 0.0) {
            return Err(SolverError::Config(format!(
                "Lipschitz constant must be positive, got {}",
                config.lipschitz
            )));
        }
        if x0.len() != problem.dimension() {
            return Err(SolverError::Config(format!(
                "start point dimension {} does not match problem dimension {}",
                x0.len(),
                problem.dimension()
            )));
        }
        Ok(Self {
            lipschitz: config.lipschitz,
            accelerated: config.accelerated,
            iteration: 0,
            y: x0.clone(),
            z: x0,
            last_eta: 0.0,
            oracle_calls: 0,
            stationary: false,
        })
    }

    pub fn step(&mut self, problem: &CompositeProblem) -> Result<StepOutcome, SolverError> {
        if self.stationary {
            return Ok(StepOutcome::Stationary);
        }
        let t = self.iteration + 1;
        if !self.accelerated {
            // plain proximal gradient with fixed step 1/L
            let (f, g) = problem.eval(&self.y);
            self.oracle_calls += 1;
            check_oracle_output(f, &g, problem.dimension(), t)?;
            let eta = 1.0 / self.lipschitz;
            let y_new = prox_step(problem.prox_term(), &self.y, &g, eta)
                .map_err(|e| SolverError::Config(e.to_string()))?;
            self.last_eta = eta;
            self.iteration = t;
            if y_new == self.y {
                self.stationary = true;
                return Ok(StepOutcome::Stationary);
            }
            self.y = y_new;
            return Ok(StepOutcome::Progressed);
        }

        let q = 2.0 / (t as f64 + 1.0);
        let x = DenseVector::combined(1.0 - q, &self.y, q, &self.z);
        let (f_x, g_x) = problem.eval(&x);
        self.oracle_calls += 1;
        check_oracle_output(f_x, &g_x, problem.dimension(), t)?;
        let eta = t as f64 / (2.0 * self.lipschitz);
        let z_new = prox_step(problem.prox_term(), &self.z, &g_x, eta)
            .map_err(|e| SolverError::Config(e.to_string()))?;
        let y_new = DenseVector::combined(1.0 - q, &self.y, q, &z_new);
        self.last_eta = eta;
        self.z = z_new;
        self.y = y_new;
        self.iteration = t;
        Ok(StepOutcome::Progressed)
    }

    pub fn output_point(&self) -> &DenseVector {
        &self.y
    }
}

impl crate::driver::FirstOrderSolver for NsAgd {
    fn step(&mut self, problem: &CompositeProblem) -> Result<StepOutcome, SolverError> {
        NsAgd::step(self, problem)
    }

    fn iteration(&self) -> usize {
        self.iteration
    }

    fn oracle_calls(&self) -> u64 {
        self.oracle_calls
    }

    fn init_oracle_calls(&self) -> u64 {
        0
    }

    fn solution(&self) -> DenseVector {
        self.y.clone()
    }

    fn objective(&self, problem: &CompositeProblem) -> f64 {
        // the algorithm never evaluates its output sequence itself
        problem.objective(&self.y)
    }

    fn stepsize(&self) -> Option<f64> {
        (self.iteration > 0).then_some(self.last_eta)
    }
}

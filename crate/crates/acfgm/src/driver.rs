//! Uniform stepping interface over all solvers, for benchmark drivers.

use crate::linalg::DenseVector;
use crate::problem::CompositeProblem;
use crate::solver::{AcFgm, SolverError, StepOutcome};

/// One first-order solver run, driven one iteration at a time.
///
/// `objective` reports the objective at the solver's output point; it may
/// evaluate `f` outside oracle accounting (trace evaluations are not
/// algorithm oracle calls).
pub trait FirstOrderSolver {
    fn step(&mut self, problem: &CompositeProblem) -> Result<StepOutcome, SolverError>;
    fn iteration(&self) -> usize;
    fn oracle_calls(&self) -> u64;
    fn init_oracle_calls(&self) -> u64;
    /// Iterations completed during initialization, if any.
    fn init_iterations(&self) -> usize {
        0
    }
    fn solution(&self) -> DenseVector;
    fn objective(&self, problem: &CompositeProblem) -> f64;
    fn stepsize(&self) -> Option<f64> {
        None
    }
    fn averaging_weight(&self) -> Option<f64> {
        None
    }
    fn local_curvature(&self) -> Option<f64> {
        None
    }
}

impl FirstOrderSolver for AcFgm {
    fn step(&mut self, problem: &CompositeProblem) -> Result<StepOutcome, SolverError> {
        AcFgm::step(self, problem)
    }

    fn iteration(&self) -> usize {
        AcFgm::iteration(self)
    }

    fn oracle_calls(&self) -> u64 {
        AcFgm::oracle_calls(self)
    }

    fn init_oracle_calls(&self) -> u64 {
        AcFgm::init_oracle_calls(self)
    }

    fn init_iterations(&self) -> usize {
        AcFgm::init_iterations(self)
    }

    fn solution(&self) -> DenseVector {
        AcFgm::solution(self)
    }

    fn objective(&self, problem: &CompositeProblem) -> f64 {
        self.reported_objective(problem)
    }

    fn stepsize(&self) -> Option<f64> {
        (AcFgm::iteration(self) > 0).then(|| AcFgm::stepsize(self))
    }

    fn averaging_weight(&self) -> Option<f64> {
        (AcFgm::iteration(self) > 0).then(|| AcFgm::averaging_weight(self))
    }

    fn local_curvature(&self) -> Option<f64> {
        (AcFgm::iteration(self) > 0).then(|| AcFgm::local_curvature(self))
    }
}

//! Comparison solvers with faithful oracle-call accounting.
//!
//! The benchmark protocol charges one oracle call per invocation of the
//! first-order oracle. Per iteration that is: one call for the adaptive
//! proximal gradient method ([`adgd`]) and the accelerated reference
//! ([`nsagd`]), one call per backtracking trial for the universal primal
//! gradient method ([`nspgm`]), and two calls per trial for the universal
//! fast gradient method ([`nsfgm`]). Initialization costs (the curvature
//! probe and any initial stepsize search) are tracked separately.
//!
//! Each module documents the exact recursion it implements.

pub mod adgd;
pub mod nsagd;
pub mod nsfgm;
pub mod nspgm;

pub use adgd::{AdGd, AdGdConfig};
pub use nsagd::{NsAgd, NsAgdConfig};
pub use nsfgm::{NsFgm, NsFgmConfig};
pub use nspgm::{NsPgm, NsPgmConfig};

use crate::driver::FirstOrderSolver;
use crate::linalg::DenseVector;
use crate::problem::CompositeProblem;
use crate::solver::SolverError;

/// Line-search trial cap. 2^60 of dynamic range exceeds any curvature
/// spread double precision can express; exhausting it means the input is
/// broken, not hard.
pub const DEFAULT_MAX_TRIALS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineMethod {
    AdGd,
    NsFgm,
    NsPgm,
    NsAgd,
}

/// One configuration covering all four baselines. Fields that a method
/// does not use are ignored by it.
#[derive(Debug, Clone)]
pub struct BaselineConfig {
    pub method: BaselineMethod,
    /// Backtracking / initial-search ratio; per-method default when
    /// `None` (2 for the universal methods, 1.5 for AdGd).
    pub line_search_gamma: Option<f64>,
    /// Target accuracy for the universal methods.
    pub epsilon: f64,
    /// Global Lipschitz constant; required by NsAgd.
    pub lipschitz: Option<f64>,
    pub max_trials: usize,
    /// NsAgd only: `false` gives fixed-step proximal gradient descent.
    pub accelerated: bool,
}

impl BaselineConfig {
    pub fn new(method: BaselineMethod) -> Self {
        Self {
            method,
            line_search_gamma: None,
            epsilon: 1e-8,
            lipschitz: None,
            max_trials: DEFAULT_MAX_TRIALS,
            accelerated: true,
        }
    }

    pub fn build(
        &self,
        problem: &CompositeProblem,
        x0: DenseVector,
    ) -> Result<Box<dyn FirstOrderSolver + Send>, SolverError> {
        match self.method {
            BaselineMethod::AdGd => {
                let config = AdGdConfig {
                    gamma: self.line_search_gamma.unwrap_or(1.5),
                    max_init_trials: self.max_trials,
                };
                Ok(Box::new(AdGd::init(problem, x0, &config)?))
            }
            BaselineMethod::NsFgm => {
                let config = NsFgmConfig {
                    gamma: self.line_search_gamma.unwrap_or(2.0),
                    epsilon: self.epsilon,
                    max_trials: self.max_trials,
                };
                Ok(Box::new(NsFgm::init(problem, x0, &config)?))
            }
            BaselineMethod::NsPgm => {
                let config = NsPgmConfig {
                    gamma: self.line_search_gamma.unwrap_or(2.0),
                    epsilon: self.epsilon,
                    max_trials: self.max_trials,
                };
                Ok(Box::new(NsPgm::init(problem, x0, &config)?))
            }
            BaselineMethod::NsAgd => {
                let lipschitz = self.lipschitz.ok_or_else(|| {
                    SolverError::Config(
                        "NsAgd needs a Lipschitz constant; none supplied".into(),
                    )
                })?;
                let config = NsAgdConfig {
                    lipschitz,
                    accelerated: self.accelerated,
                };
                Ok(Box::new(NsAgd::init(problem, x0, &config)?))
            }
        }
    }
}

/// Secant curvature probe shared by the baselines: evaluates the oracle
/// at a deterministic perturbation of the start point and returns
/// `||g(probe) - g(x0)|| / ||probe - x0||`, floored to stay positive.
pub(crate) fn probe_curvature(
    problem: &CompositeProblem,
    x0: &DenseVector,
    g0: &DenseVector,
    calls: &mut u64,
) -> f64 {
    let delta = 1e-2 * x0.norm().max(1.0);
    let probe = DenseVector::from_fn(x0.len(), |i| x0[i] + if i == 0 { delta } else { 0.0 })
        .expect("finite probe");
    let (_, g_probe) = problem.eval(&probe);
    *calls += 1;
    let l0 = g0.dist(&g_probe) / x0.dist(&probe);
    if l0 > 0.0 {
        l0
    } else {
        crate::solver::init::CURVATURE_FLOOR
    }
}

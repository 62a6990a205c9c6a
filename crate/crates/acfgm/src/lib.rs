//! Convex composite optimization with the auto-conditioned fast gradient
//! method (AC-FGM) and companion first-order solvers.
//!
//! The centerpiece is [`solver::AcFgm`], a parameter-free accelerated
//! method for `min f(x) + h(x)`: it needs no Lipschitz constant and no
//! per-iteration line search, estimating the local curvature it actually
//! encounters and adapting its stepsizes to it. A target-accuracy mode
//! extends the same machinery to objectives that are only Hölder smooth
//! or outright nonsmooth. Runs can emit closed-form optimality-gap
//! certificates evaluated from realized quantities.
//!
//! Around the solver:
//!
//! - [`prox`]: the prox-friendly terms (`0`, weighted `l1`, ball
//!   indicator) and the shared prox-mapping step;
//! - [`baselines`]: adaptive proximal gradient descent, the universal
//!   fast/primal gradient methods, and fixed-constant accelerated
//!   descent, all with faithful oracle-call accounting;
//! - [`problems`]: least-squares/QP, lasso, square-root lasso and sparse
//!   logistic oracles, seeded instance generation, LIBSVM ingestion and
//!   penalty calculators;
//! - [`driver`]: the uniform stepping interface benchmark harnesses
//!   drive.
//!
//! ```
//! use acfgm::problems::{least_squares, random_qp_instance};
//! use acfgm::solver::{AcFgm, PolicyKind, SolverConfig};
//! use acfgm::DenseVector;
//! use std::sync::Arc;
//!
//! let data = Arc::new(random_qp_instance(40, 60, 7));
//! let problem = least_squares(&data);
//! let mut config = SolverConfig::new(PolicyKind::Adaptive { alpha: 0.1 });
//! config.max_iterations = 1000;
//! let run = AcFgm::run(&problem, DenseVector::zeros(60), &config).unwrap();
//! assert!(run.last_iterate_objective(&problem) < 1e-8);
//! ```

pub mod baselines;
pub mod driver;
pub mod linalg;
pub mod problem;
pub mod problems;
pub mod prox;
pub mod solver;

pub use driver::FirstOrderSolver;
pub use linalg::{DenseVector, LinalgError, SparseMatrixCsr};
pub use problem::CompositeProblem;
pub use prox::{prox_step, ProxError, ProxTerm};
pub use solver::{AcFgm, PolicyKind, SolverConfig, SolverError, StepOutcome};

//! The auto-conditioned fast gradient method.
//!
//! Each iteration takes a prox step from the extrapolated prox-center
//! against the gradient at the previous query point, blends the result
//! into the prox-center, forms the next query point as a weighted average
//! with the old one, and spends its single oracle call there. Stepsizes
//! come from the measured local curvature of the previous iteration, so
//! no Lipschitz constant and no per-iteration line search is needed.
//!
//! Next-iteration parameters are computed eagerly at the end of each
//! iteration (pure arithmetic, no oracle), which keeps the weighted
//! averaged iterate queryable at every stopping point.

pub mod certificate;
pub mod curvature;
pub mod init;
pub mod policy;

use crate::linalg::DenseVector;
use crate::problem::CompositeProblem;
use crate::prox::prox_step;
use thiserror::Error;

pub use certificate::{evaluate_certificate, Certificate, CertificateInputs};
pub use curvature::{curvature_first, curvature_hoelder, curvature_hoelder_first, curvature_smooth};
pub use init::InitStrategy;
pub use policy::{
    default_beta, max_beta, validate_schedule, IterationRecord, PolicyKind, ScheduleCondition,
    ScheduleViolation,
};

use policy::{stepsize_adaptive, stepsize_simple};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    Config(String),
    #[error("invalid solver state: {0}")]
    InvalidState(&'static str),
    #[error("solver diverged at iteration {iteration}: {detail}")]
    Diverged { iteration: usize, detail: String },
    #[error("line search used {trials} trials without acceptance")]
    LineSearchExhausted { trials: usize },
}

/// Result of one solver step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Progressed,
    /// The prox step returned its own center: the current point is
    /// optimal and the run is over.
    Stationary,
}

/// Optional early stop on the optimality gap against a known reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapTarget {
    pub reference_objective: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub policy: PolicyKind,
    /// Prox-center mixing weight in `(0, 1 - sqrt(6)/3]`.
    pub beta: f64,
    pub init: InitStrategy,
    pub max_line_search_trials: usize,
    /// Iteration budget for [`AcFgm::run`].
    pub max_iterations: usize,
    pub gap_target: Option<GapTarget>,
}

impl SolverConfig {
    pub fn new(policy: PolicyKind) -> Self {
        Self {
            policy,
            beta: default_beta(),
            init: InitStrategy::default(),
            max_line_search_trials: 60,
            max_iterations: 1000,
            gap_target: None,
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        self.policy.validate()?;
        policy::validate_beta(self.beta)?;
        self.init.validate()?;
        if self.max_iterations == 0 {
            return Err(SolverError::Config("iteration budget must be >= 1".into()));
        }
        Ok(())
    }
}

/// Full per-iteration state of the method.
#[derive(Debug)]
pub struct AcFgm {
    policy: PolicyKind,
    beta: f64,
    epsilon: Option<f64>,
    schedule_alpha: f64,

    /// Completed iterations.
    t: usize,
    /// Latest prox-step solution `z_t`.
    z: DenseVector,
    /// Prox-center `y_t`.
    y: DenseVector,
    /// Gradient-query / output point `x_t`.
    x: DenseVector,
    f_cur: f64,
    g_cur: DenseVector,

    /// Parameters the next iteration will run with.
    eta_next: f64,
    tau_next: f64,
    /// Parameters of the last completed iteration.
    eta_last: f64,
    tau_last: f64,

    eta1: f64,
    eta2: Option<f64>,
    l1: Option<f64>,
    z1_dist_sq: Option<f64>,

    /// Most recent curvature estimate.
    l_last: f64,
    /// Running max of curvature estimates, floored at
    /// `1/(4 (1-beta) eta_1)`.
    hat_l: f64,

    /// Weighted sum of past query points (all but the newest term of the
    /// averaged iterate).
    avg_num: DenseVector,
    /// `sum_{t=2}^{k+1} eta_t`; also the averaged-iterate denominator.
    avg_den: f64,
    /// `sum_{t=1}^{k} (3 + alpha (t-2)) / hat_l_t` for certificates.
    cert_weight_sum: f64,

    oracle_calls: u64,
    init_oracle_calls: u64,
    init_iterations: usize,
    /// Probe curvature the initial stepsize came from (0 for explicit).
    probe_curvature: f64,
    init_line_search_trials: usize,

    history: Vec<IterationRecord>,
    stationary: bool,
}

impl AcFgm {
    /// Evaluate the start point, choose the initial stepsize, and (for
    /// the line-search strategy) absorb the first iteration it produced.
    pub fn init(
        problem: &CompositeProblem,
        z0: DenseVector,
        config: &SolverConfig,
    ) -> Result<Self, SolverError> {
        config.validate()?;
        if z0.len() != problem.dimension() {
            return Err(SolverError::Config(format!(
                "start point dimension {} does not match problem dimension {}",
                z0.len(),
                problem.dimension()
            )));
        }
        let (f0, g0) = problem.eval(&z0);
        let mut calls = 1u64;
        check_oracle_output(f0, &g0, problem.dimension(), 0)?;

        let epsilon = config.policy.epsilon();
        let outcome = init::initial_stepsize(
            &config.init,
            problem,
            &z0,
            f0,
            &g0,
            config.beta,
            epsilon,
            config.max_line_search_trials,
        )?;
        calls += outcome.extra_oracle_calls;

        let eta1 = outcome.eta1;
        let mut state = Self {
            policy: config.policy.clone(),
            beta: config.beta,
            epsilon,
            schedule_alpha: config.policy.schedule_alpha(),
            t: 0,
            z: z0.clone(),
            y: z0.clone(),
            x: z0,
            f_cur: f0,
            g_cur: g0,
            eta_next: eta1,
            tau_next: 0.0,
            eta_last: 0.0,
            tau_last: 0.0,
            eta1,
            eta2: None,
            l1: None,
            z1_dist_sq: None,
            l_last: 0.0,
            hat_l: 1.0 / (4.0 * (1.0 - config.beta) * eta1),
            avg_num: DenseVector::zeros(problem.dimension()),
            avg_den: 0.0,
            cert_weight_sum: 0.0,
            oracle_calls: calls,
            init_oracle_calls: calls,
            init_iterations: 0,
            probe_curvature: outcome.l0,
            init_line_search_trials: 0,
            history: Vec::new(),
            stationary: false,
        };

        if let Some(first) = outcome.first_iteration {
            state.init_line_search_trials = first.trials;
            if first.z1 == state.z {
                state.stationary = true;
                return Ok(state);
            }
            let x_old = state.x.clone();
            // beta_1 = 0 leaves the prox-center at z_0; tau_1 = 0 makes
            // the first query point the prox solution itself
            state.z1_dist_sq = Some(x_old.dist_sq(&first.z1));
            state.z = first.z1.clone();
            state.x = first.z1;
            state.absorb_iteration(1, eta1, 0.0, &x_old, first.f1, first.g1, first.l1);
            state.init_iterations = 1;
            state.init_oracle_calls = state.oracle_calls;
        }
        Ok(state)
    }

    /// One iteration: prox step, center blend, query-point average, one
    /// oracle call, curvature update, next parameters.
    pub fn step(&mut self, problem: &CompositeProblem) -> Result<StepOutcome, SolverError> {
        if self.stationary {
            return Ok(StepOutcome::Stationary);
        }
        let t = self.t + 1;
        let eta_t = self.eta_next;
        let tau_t = self.tau_next;

        let z_new = prox_step(problem.prox_term(), &self.y, &self.g_cur, eta_t)
            .map_err(|e| SolverError::Config(e.to_string()))?;
        let beta_t = if t == 1 { 0.0 } else { self.beta };
        let y_new = DenseVector::combined(1.0 - beta_t, &self.y, beta_t, &z_new);
        let x_new = if tau_t == 0.0 {
            z_new.clone()
        } else {
            DenseVector::combined(
                1.0 / (1.0 + tau_t),
                &z_new,
                tau_t / (1.0 + tau_t),
                &self.x,
            )
        };

        if t == 1 && x_new == self.x {
            // prox fixed point at the start: already optimal
            self.stationary = true;
            return Ok(StepOutcome::Stationary);
        }

        let (f_new, g_new) = problem.eval(&x_new);
        self.oracle_calls += 1;
        check_oracle_output(f_new, &g_new, problem.dimension(), t)?;

        let l_t = if t == 1 {
            self.z1_dist_sq = Some(self.z.dist_sq(&z_new));
            match self.epsilon {
                None => curvature_first(&self.x, &x_new, &self.g_cur, &g_new)?,
                Some(eps) => curvature_hoelder_first(&self.x, &x_new, &self.g_cur, &g_new, eps)?,
            }
        } else {
            match self.epsilon {
                None => curvature_smooth(self.f_cur, f_new, &self.g_cur, &g_new, &self.x, &x_new),
                Some(eps) => curvature_hoelder(
                    eps, tau_t, self.f_cur, f_new, &self.g_cur, &g_new, &self.x, &x_new,
                ),
            }
        };

        let x_old = std::mem::replace(&mut self.x, x_new);
        self.z = z_new;
        self.y = y_new;
        self.absorb_iteration(t, eta_t, tau_t, &x_old, f_new, g_new, l_t);
        Ok(StepOutcome::Progressed)
    }

    /// Book-keeping shared by `step` and the line-search first iteration:
    /// curvature maxima, next-step parameters, averaging accumulators,
    /// certificate sums, history.
    fn absorb_iteration(
        &mut self,
        t: usize,
        eta_t: f64,
        tau_t: f64,
        x_old: &DenseVector,
        f_new: f64,
        g_new: DenseVector,
        l_t: f64,
    ) {
        self.f_cur = f_new;
        self.g_cur = g_new;
        self.l_last = l_t;
        self.hat_l = self.hat_l.max(l_t);
        if t == 1 {
            self.l1 = Some(l_t);
        }

        // Relaxed mode pairs the relaxed curvature estimates with the
        // simple schedule unless a different alpha was requested.
        let use_simple = match self.policy {
            PolicyKind::Simple => true,
            PolicyKind::Adaptive { .. } => false,
            PolicyKind::Hoelder { alpha, .. } => alpha == 1.0,
        };
        let (eta_next, tau_next) = if use_simple {
            stepsize_simple(t + 1, self.eta1, eta_t, l_t, self.beta)
        } else {
            stepsize_adaptive(
                t + 1,
                self.schedule_alpha,
                self.eta1,
                eta_t,
                tau_t,
                self.tau_last,
                l_t,
                self.beta,
            )
        };
        if t == 1 {
            self.eta2 = Some(eta_next);
        }

        // averaged iterate: fold the weight of x_{t-1}, now that eta_{t+1}
        // fixes it, and extend the denominator by eta_{t+1}
        if t >= 2 {
            let w = (self.tau_last + 1.0) * eta_t - tau_t * eta_next;
            self.avg_num.add_scaled(w, x_old);
        }
        self.avg_den += eta_next;
        self.cert_weight_sum += (3.0 + self.schedule_alpha * (t as f64 - 2.0)) / self.hat_l;

        self.history.push(IterationRecord {
            eta: eta_t,
            tau: tau_t,
            curvature: l_t,
            hat_l: self.hat_l,
        });
        self.eta_last = eta_t;
        self.tau_last = tau_t;
        self.eta_next = eta_next;
        self.tau_next = tau_next;
        self.t = t;
    }

    /// Run until the budget, the gap target, or a stationary point.
    pub fn run(
        problem: &CompositeProblem,
        z0: DenseVector,
        config: &SolverConfig,
    ) -> Result<Self, SolverError> {
        let mut state = Self::init(problem, z0, config)?;
        while state.t < config.max_iterations && !state.stationary {
            if state.step(problem)? == StepOutcome::Stationary {
                break;
            }
            if let Some(target) = config.gap_target {
                if state.reported_objective(problem) - target.reference_objective
                    <= target.tolerance
                {
                    break;
                }
            }
        }
        Ok(state)
    }

    /// Weighted averaged iterate over the completed iterations.
    pub fn averaged_iterate(&self) -> Result<DenseVector, SolverError> {
        if self.t == 0 {
            return Err(SolverError::InvalidState(
                "averaged iterate undefined before the first iteration",
            ));
        }
        let mut num = self.avg_num.clone();
        num.add_scaled((self.tau_last + 1.0) * self.eta_next, &self.x);
        Ok(num.scaled(1.0 / self.avg_den))
    }

    /// The point this run reports as its solution: the averaged iterate
    /// in relaxed mode (it carries the guarantee there), the last query
    /// point otherwise.
    pub fn solution(&self) -> DenseVector {
        match self.policy {
            PolicyKind::Hoelder { .. } => self
                .averaged_iterate()
                .unwrap_or_else(|_| self.x.clone()),
            _ => self.x.clone(),
        }
    }

    /// Objective at the reported solution. For smooth policies this
    /// reuses the cached oracle value; in relaxed mode it evaluates the
    /// averaged iterate outside oracle accounting.
    pub fn reported_objective(&self, problem: &CompositeProblem) -> f64 {
        match self.policy {
            PolicyKind::Hoelder { .. } if self.t > 0 => {
                problem.objective(&self.averaged_iterate().expect("t > 0"))
            }
            _ => self.f_cur + problem.prox_value(&self.x),
        }
    }

    /// Objective at the last query point, reusing the cached `f`.
    pub fn last_iterate_objective(&self, problem: &CompositeProblem) -> f64 {
        self.f_cur + problem.prox_value(&self.x)
    }

    /// Certificate bounds evaluated with this run's realized quantities
    /// and a caller-supplied squared start distance.
    pub fn certificate(&self, dist0_sq: f64) -> Result<Certificate, SolverError> {
        if self.t == 0 {
            return Err(SolverError::InvalidState(
                "certificate undefined before the first iteration",
            ));
        }
        Ok(evaluate_certificate(CertificateInputs {
            policy: self.policy.clone(),
            k: self.t,
            beta: self.beta,
            eta1: self.eta1,
            eta2: self.eta2.expect("set at t = 1"),
            l1: self.l1.expect("set at t = 1"),
            hat_l: self.hat_l,
            dist0_sq,
            z1_dist_sq: self.z1_dist_sq.unwrap_or(0.0),
            sum_eta: self.avg_den,
            weight_sum: self.cert_weight_sum,
        }))
    }

    pub fn iteration(&self) -> usize {
        self.t
    }

    pub fn last_iterate(&self) -> &DenseVector {
        &self.x
    }

    pub fn prox_point(&self) -> &DenseVector {
        &self.z
    }

    pub fn prox_center(&self) -> &DenseVector {
        &self.y
    }

    pub fn smooth_value(&self) -> f64 {
        self.f_cur
    }

    pub fn gradient(&self) -> &DenseVector {
        &self.g_cur
    }

    pub fn stepsize(&self) -> f64 {
        self.eta_last
    }

    /// Parameters already fixed for the next iteration.
    pub fn next_parameters(&self) -> (f64, f64) {
        (self.eta_next, self.tau_next)
    }

    pub fn averaging_weight(&self) -> f64 {
        self.tau_last
    }

    pub fn local_curvature(&self) -> f64 {
        self.l_last
    }

    pub fn curvature_max(&self) -> f64 {
        self.hat_l
    }

    pub fn eta1(&self) -> f64 {
        self.eta1
    }

    pub fn eta2(&self) -> Option<f64> {
        self.eta2
    }

    pub fn oracle_calls(&self) -> u64 {
        self.oracle_calls
    }

    pub fn init_oracle_calls(&self) -> u64 {
        self.init_oracle_calls
    }

    /// Iterations completed during initialization (1 when the first
    /// iteration came out of the line search).
    pub fn init_iterations(&self) -> usize {
        self.init_iterations
    }

    /// Curvature estimate of the initialization probe.
    pub fn probe_curvature(&self) -> f64 {
        self.probe_curvature
    }

    /// Trials the first-iteration line search used (0 without one).
    pub fn init_line_search_trials(&self) -> usize {
        self.init_line_search_trials
    }

    pub fn is_stationary(&self) -> bool {
        self.stationary
    }

    pub fn history(&self) -> &[IterationRecord] {
        &self.history
    }

    pub fn averaged_denominator(&self) -> f64 {
        self.avg_den
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn policy(&self) -> &PolicyKind {
        &self.policy
    }
}

pub(crate) fn check_oracle_output(
    f: f64,
    g: &DenseVector,
    dimension: usize,
    iteration: usize,
) -> Result<(), SolverError> {
    if g.len() != dimension {
        return Err(SolverError::Diverged {
            iteration,
            detail: format!(
                "oracle returned gradient of length {}, expected {dimension}",
                g.len()
            ),
        });
    }
    if !f.is_finite() || !g.is_finite() {
        return Err(SolverError::Diverged {
            iteration,
            detail: "oracle returned a non-finite value or gradient".into(),
        });
    }
    Ok(())
}

//! Experiment execution: dataset assembly, solver construction, the
//! record loop, and reference-objective resolution.

use crate::config::{
    DataSource, ExperimentConfig, Family, InitCfg, PolicyCfg, SolverKindCfg, SolverSpec,
};
use crate::cputime::CpuTimer;
use crate::trace::{Trace, TraceMeta, TraceRecord};
use crate::HarnessError;
use acfgm::baselines::{AdGd, AdGdConfig, NsAgd, NsAgdConfig, NsFgm, NsFgmConfig, NsPgm, NsPgmConfig};
use acfgm::driver::FirstOrderSolver;
use acfgm::problems::{
    lasso, least_squares, least_squares_lipschitz, load_libsvm, logistic,
    logistic_lipschitz_upper, random_qp_instance, resolve_penalty, sqrt_lasso, Dataset,
};
use acfgm::solver::{AcFgm, InitStrategy, PolicyKind, SolverConfig, SolverError};
use acfgm::{CompositeProblem, DenseVector, StepOutcome};
use rayon::prelude::*;
use std::sync::Arc;

pub fn build_dataset(config: &ExperimentConfig) -> Result<Arc<Dataset>, HarnessError> {
    match &config.problem.source {
        DataSource::Synthetic { m, n } => {
            if *m == 0 || *n == 0 {
                return Err(HarnessError::Config(
                    "synthetic instances need m >= 1 and n >= 1".into(),
                ));
            }
            Ok(Arc::new(random_qp_instance(*m, *n, config.seed)))
        }
        DataSource::File { path, format } => load_libsvm(path, *format)
            .map(Arc::new)
            .map_err(|e| HarnessError::Data(format!("{}: {e}", path.display()))),
    }
}

/// Build the composite problem; returns the known optimal objective when
/// the construction pins it down (synthetic least squares with planted
/// targets has optimum exactly zero).
pub fn build_problem(
    config: &ExperimentConfig,
    data: &Arc<Dataset>,
) -> Result<(CompositeProblem, Option<f64>), HarnessError> {
    let family = config.problem.family;
    let penalty = || -> Result<f64, HarnessError> {
        let family_cfg = config.problem.penalty.ok_or_else(|| {
            HarnessError::Config(format!(
                "problem family `{}` needs problem.penalty.*",
                family.as_str()
            ))
        })?;
        Ok(resolve_penalty(family_cfg, data)
            .map_err(|e| HarnessError::Config(e.to_string()))?
            .lambda)
    };
    match family {
        Family::Qp => {
            if config.problem.penalty.is_some() {
                return Err(HarnessError::Config(
                    "family qp takes no penalty; use family lasso instead".into(),
                ));
            }
            let known = data.planted_solution.as_ref().map(|_| 0.0);
            Ok((least_squares(data), known))
        }
        Family::Lasso => Ok((
            lasso(data, penalty()?).map_err(|e| HarnessError::Config(e.to_string()))?,
            None,
        )),
        Family::SqrtLasso => Ok((
            sqrt_lasso(data, penalty()?).map_err(|e| HarnessError::Config(e.to_string()))?,
            None,
        )),
        Family::Logistic => Ok((
            logistic(data, penalty()?).map_err(|e| HarnessError::Data(e.to_string()))?,
            None,
        )),
    }
}

fn build_solver(
    spec: &SolverSpec,
    config: &ExperimentConfig,
    problem: &CompositeProblem,
    data: &Arc<Dataset>,
) -> Result<Box<dyn FirstOrderSolver + Send>, SolverError> {
    let x0 = DenseVector::zeros(problem.dimension());
    match &spec.kind {
        SolverKindCfg::AcFgm {
            policy,
            alpha,
            epsilon,
            beta,
            init,
            scale,
            gamma,
        } => {
            let policy = match policy {
                PolicyCfg::Simple => PolicyKind::Simple,
                PolicyCfg::Adaptive => PolicyKind::Adaptive { alpha: *alpha },
                PolicyCfg::Hoelder => PolicyKind::Hoelder {
                    epsilon: *epsilon,
                    alpha: *alpha,
                },
            };
            let mut solver_config = SolverConfig::new(policy);
            if let Some(beta) = beta {
                solver_config.beta = *beta;
            }
            solver_config.init = match init {
                InitCfg::FromL0 => InitStrategy::FromL0 {
                    probe: None,
                    scale: *scale,
                },
                InitCfg::LineSearch => InitStrategy::FirstIterLineSearch {
                    probe: None,
                    gamma: *gamma,
                },
            };
            solver_config.max_iterations = config.budget;
            Ok(Box::new(AcFgm::init(problem, x0, &solver_config)?))
        }
        SolverKindCfg::AdGd { gamma } => Ok(Box::new(AdGd::init(
            problem,
            x0,
            &AdGdConfig {
                gamma: *gamma,
                ..AdGdConfig::default()
            },
        )?)),
        SolverKindCfg::NsFgm { gamma, epsilon } => Ok(Box::new(NsFgm::init(
            problem,
            x0,
            &NsFgmConfig {
                gamma: *gamma,
                epsilon: *epsilon,
                ..NsFgmConfig::default()
            },
        )?)),
        SolverKindCfg::NsPgm { gamma, epsilon } => Ok(Box::new(NsPgm::init(
            problem,
            x0,
            &NsPgmConfig {
                gamma: *gamma,
                epsilon: *epsilon,
                ..NsPgmConfig::default()
            },
        )?)),
        SolverKindCfg::NsAgd {
            lipschitz,
            accelerated,
        } => {
            let l = match lipschitz {
                Some(l) => *l,
                None => match config.problem.family {
                    Family::Qp | Family::Lasso => least_squares_lipschitz(data),
                    Family::Logistic => logistic_lipschitz_upper(data),
                    Family::SqrtLasso => {
                        return Err(SolverError::Config(
                            "sqrt_lasso has no finite gradient Lipschitz constant; \
                             give solver.<name>.lipschitz a number"
                                .into(),
                        ))
                    }
                },
            };
            Ok(Box::new(NsAgd::init(
                problem,
                x0,
                &NsAgdConfig {
                    lipschitz: l,
                    accelerated: *accelerated,
                },
            )?))
        }
    }
}

fn record(
    solver: &dyn FirstOrderSolver,
    problem: &CompositeProblem,
    timer: &CpuTimer,
) -> TraceRecord {
    TraceRecord {
        iteration: solver.iteration() as u64,
        oracle_calls: solver.oracle_calls(),
        elapsed_seconds: timer.cpu_elapsed(),
        objective: solver.objective(problem),
        gap: None,
        eta: solver.stepsize(),
        tau: solver.averaging_weight(),
        l_local: solver.local_curvature(),
    }
}

fn run_single(
    spec: &SolverSpec,
    config: &ExperimentConfig,
    problem: &CompositeProblem,
    data: &Arc<Dataset>,
    problem_name: &str,
    config_hash: &str,
) -> Result<Trace, HarnessError> {
    let timer = CpuTimer::start();
    let mut meta = TraceMeta {
        solver: spec.name.clone(),
        problem: problem_name.to_string(),
        config_hash: config_hash.to_string(),
        diverged: false,
        divergence_detail: None,
        init_oracle_calls: 0,
        init_iterations: 0,
        wall_seconds: 0.0,
        reference_objective: None,
    };
    let mut records = Vec::new();

    let mut solver = match build_solver(spec, config, problem, data) {
        Ok(s) => s,
        Err(SolverError::Config(msg)) => {
            return Err(HarnessError::Config(format!("solver {}: {msg}", spec.name)))
        }
        Err(e) => {
            // runtime failure during initialization: a diverged, empty run
            meta.diverged = true;
            meta.divergence_detail = Some(e.to_string());
            meta.wall_seconds = timer.wall_elapsed();
            return Ok(Trace { meta, records });
        }
    };
    meta.init_oracle_calls = solver.init_oracle_calls();
    meta.init_iterations = solver.init_iterations() as u64;

    records.push(record(solver.as_ref(), problem, &timer));
    while solver.iteration() < config.budget {
        match solver.step(problem) {
            Ok(StepOutcome::Progressed) => {
                let iter = solver.iteration();
                if iter % config.stride == 0 || iter == config.budget {
                    records.push(record(solver.as_ref(), problem, &timer));
                }
            }
            Ok(StepOutcome::Stationary) => break,
            Err(e @ (SolverError::Diverged { .. } | SolverError::LineSearchExhausted { .. })) => {
                meta.diverged = true;
                meta.divergence_detail = Some(e.to_string());
                break;
            }
            Err(e) => {
                return Err(HarnessError::Config(format!("solver {}: {e}", spec.name)))
            }
        }
    }
    if records.last().map(|r| r.iteration) != Some(solver.iteration() as u64) {
        records.push(record(solver.as_ref(), problem, &timer));
    }
    meta.wall_seconds = timer.wall_elapsed();
    Ok(Trace { meta, records })
}

/// Run every configured solver on the configured problem. Deterministic
/// given the seed, except for the timing fields. Diverged runs produce
/// truncated, flagged traces; sibling runs are unaffected.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<Trace>, HarnessError> {
    let data = build_dataset(config)?;
    let (problem, known_reference) = build_problem(config, &data)?;
    let config_hash = config.hash();
    let problem_name = data.name.clone();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| HarnessError::Config(format!("cannot build worker pool: {e}")))?;
    let mut traces: Vec<Trace> = pool.install(|| {
        config
            .solvers
            .par_iter()
            .map(|spec| {
                run_single(spec, config, &problem, &data, &problem_name, &config_hash)
            })
            .collect::<Result<Vec<_>, _>>()
    })?;

    // resolve the reference objective: the known optimum when available,
    // otherwise the lowest recorded objective across all runs
    let reference = known_reference.or_else(|| {
        traces
            .iter()
            .flat_map(|t| t.records.iter().map(|r| r.objective))
            .fold(None, |acc: Option<f64>, v| {
                Some(acc.map_or(v, |a| a.min(v)))
            })
    });
    if let Some(reference) = reference {
        for trace in &mut traces {
            trace.meta.reference_objective = Some(reference);
            for r in &mut trace.records {
                debug_assert!(
                    r.objective >= reference,
                    "reference exceeds a recorded objective"
                );
                r.gap = Some(r.objective - reference);
            }
        }
    }

    traces.sort_by_key(Trace::run_key);
    Ok(traces)
}

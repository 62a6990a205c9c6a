//! Cross-cutting baseline contracts: accounting under an instrumented
//! oracle, feasibility under an indicator term, and construction.

use acfgm::baselines::{
    AdGd, AdGdConfig, BaselineConfig, BaselineMethod, NsAgd, NsAgdConfig, NsFgm, NsFgmConfig,
    NsPgm, NsPgmConfig,
};
use acfgm::driver::FirstOrderSolver;
use acfgm::problems::{least_squares, least_squares_lipschitz, random_qp_instance};
use acfgm::{CompositeProblem, DenseVector, ProxTerm, SolverError};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

fn counting_problem(counter: Arc<AtomicU64>, term: ProxTerm) -> CompositeProblem {
    CompositeProblem::new(2, term, move |x| {
        counter.fetch_add(1, Ordering::SeqCst);
        (
            0.5 * (2.0 * x[0] * x[0] + 5.0 * x[1] * x[1]),
            DenseVector::new(vec![2.0 * x[0], 5.0 * x[1]]).unwrap(),
        )
    })
}

fn start() -> DenseVector {
    DenseVector::new(vec![1.5, -1.0]).unwrap()
}

#[test]
fn accounting_rules_hold_under_instrumented_oracle() {
    // AdGd: one call per iteration
    let counter = Arc::new(AtomicU64::new(0));
    let p = counting_problem(Arc::clone(&counter), ProxTerm::Zero);
    let mut adgd = AdGd::init(&p, start(), &AdGdConfig::default()).unwrap();
    let mut external = counter.load(Ordering::SeqCst);
    assert_eq!(external, adgd.oracle_calls());
    for _ in 0..30 {
        adgd.step(&p).unwrap();
        let now = counter.load(Ordering::SeqCst);
        assert_eq!(now - external, 1);
        external = now;
    }

    // NsFgm: two calls per backtracking trial
    let counter = Arc::new(AtomicU64::new(0));
    let p = counting_problem(Arc::clone(&counter), ProxTerm::Zero);
    let mut nsfgm = NsFgm::init(&p, start(), &NsFgmConfig::default()).unwrap();
    let mut external = counter.load(Ordering::SeqCst);
    for _ in 0..30 {
        nsfgm.step(&p).unwrap();
        let now = counter.load(Ordering::SeqCst);
        assert_eq!(now - external, 2 * nsfgm.last_trials() as u64);
        external = now;
    }

    // NsPgm: one call per trial
    let counter = Arc::new(AtomicU64::new(0));
    let p = counting_problem(Arc::clone(&counter), ProxTerm::Zero);
    let mut nspgm = NsPgm::init(&p, start(), &NsPgmConfig::default()).unwrap();
    let mut external = counter.load(Ordering::SeqCst);
    for _ in 0..30 {
        nspgm.step(&p).unwrap();
        let now = counter.load(Ordering::SeqCst);
        assert_eq!(now - external, nspgm.last_trials() as u64);
        external = now;
    }

    // NsAgd: one call per iteration, none at init
    let counter = Arc::new(AtomicU64::new(0));
    let p = counting_problem(Arc::clone(&counter), ProxTerm::Zero);
    let mut nsagd = NsAgd::init(&p, start(), &NsAgdConfig::new(5.0)).unwrap();
    assert_eq!(counter.load(Ordering::SeqCst), 0);
    for k in 1..=30u64 {
        nsagd.step(&p).unwrap();
        assert_eq!(counter.load(Ordering::SeqCst), k);
    }
}

#[test]
fn iterates_stay_feasible_under_ball_indicator() {
    // minimize a quadratic whose unconstrained optimum lies outside the
    // feasible ball; every reported iterate must keep h finite
    let term = ProxTerm::ball(0.5).unwrap();
    let target = DenseVector::new(vec![2.0, -2.0]).unwrap();
    let make = |term: ProxTerm| {
        let t = target.clone();
        CompositeProblem::new(2, term, move |x| {
            let d = x.sub(&t);
            (0.5 * d.norm_sq(), d)
        })
    };

    let p = make(term.clone());
    let mut solvers: Vec<Box<dyn FirstOrderSolver>> = vec![
        Box::new(AdGd::init(&p, start(), &AdGdConfig::default()).unwrap()),
        Box::new(NsFgm::init(&p, start(), &NsFgmConfig::default()).unwrap()),
        Box::new(NsPgm::init(&p, start(), &NsPgmConfig::default()).unwrap()),
        Box::new(NsAgd::init(&p, start(), &NsAgdConfig::new(1.0)).unwrap()),
    ];
    for solver in solvers.iter_mut() {
        for _ in 0..40 {
            solver.step(&p).unwrap();
            let point = solver.solution();
            assert!(
                p.prox_value(&point).is_finite(),
                "iterate left the feasible set"
            );
            assert!(point.norm() <= 0.5 * (1.0 + 1e-9));
        }
    }
}

#[test]
fn universal_methods_approach_constrained_optimum() {
    // same constrained problem; the optimum is the ball boundary point
    // along the target direction
    let term = ProxTerm::ball(0.5).unwrap();
    let target = DenseVector::new(vec![2.0, -2.0]).unwrap();
    let t = target.clone();
    let p = CompositeProblem::new(2, term, move |x| {
        let d = x.sub(&t);
        (0.5 * d.norm_sq(), d)
    });
    let optimum = target.scaled(0.5 / target.norm());
    let psi_star = p.objective(&optimum);

    let mut nsfgm = NsFgm::init(&p, start(), &NsFgmConfig::default()).unwrap();
    let mut nspgm = NsPgm::init(&p, start(), &NsPgmConfig::default()).unwrap();
    for _ in 0..200 {
        nsfgm.step(&p).unwrap();
        nspgm.step(&p).unwrap();
    }
    assert!(FirstOrderSolver::objective(&nsfgm, &p) - psi_star < 1e-6);
    assert!(FirstOrderSolver::objective(&nspgm, &p) - psi_star < 1e-6);
}

#[test]
fn baseline_config_builds_each_method() {
    let data = Arc::new(random_qp_instance(15, 10, 4));
    let p = least_squares(&data);
    let x0 = DenseVector::zeros(10);
    for method in [
        BaselineMethod::AdGd,
        BaselineMethod::NsFgm,
        BaselineMethod::NsPgm,
    ] {
        let mut solver = BaselineConfig::new(method).build(&p, x0.clone()).unwrap();
        for _ in 0..5 {
            solver.step(&p).unwrap();
        }
        assert_eq!(solver.iteration(), 5);
    }

    // NsAgd requires a Lipschitz constant
    let missing = BaselineConfig::new(BaselineMethod::NsAgd).build(&p, x0.clone());
    assert!(matches!(missing, Err(SolverError::Config(_))));
    let mut cfg = BaselineConfig::new(BaselineMethod::NsAgd);
    cfg.lipschitz = Some(least_squares_lipschitz(&data));
    let mut solver = cfg.build(&p, x0).unwrap();
    for _ in 0..5 {
        solver.step(&p).unwrap();
    }
    assert_eq!(solver.iteration(), 5);
}

#[test]
fn accelerated_reference_beats_plain_descent_on_conditioned_problem() {
    let data = Arc::new(random_qp_instance(60, 40, 19));
    let p = least_squares(&data);
    let l = least_squares_lipschitz(&data);
    let x0 = DenseVector::zeros(40);

    let mut accel = NsAgd::init(&p, x0.clone(), &NsAgdConfig::new(l)).unwrap();
    let mut plain = NsAgd::init(
        &p,
        x0,
        &NsAgdConfig {
            lipschitz: l,
            accelerated: false,
        },
    )
    .unwrap();
    for _ in 0..300 {
        accel.step(&p).unwrap();
        plain.step(&p).unwrap();
    }
    let gap_accel = p.objective(accel.output_point());
    let gap_plain = FirstOrderSolver::objective(&plain, &p);
    assert!(
        gap_accel < gap_plain,
        "acceleration did not help: {gap_accel} vs {gap_plain}"
    );
}

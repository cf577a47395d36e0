mod common;

use common::{bisect, path, random_domain, random_graph};
use graphpde_core::solver::{
    ball_minimize, build_spike_endpoint, mountain_pass, solve_single, two_solutions, weak_residual,
};
use graphpde_core::{
    DomainPartition, GraphFunction, Hypothesis, MeasureMode, Nonlinearity, Problem, SolutionKind,
    SolverConfig, SolverError, StepRule, TwoSolutionMode,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn path3(nl: Nonlinearity) -> Problem {
    let g = path(3);
    let p = DomainPartition::compute_by_ids(&g, &["b"]).unwrap();
    Problem::new(g, p, GraphFunction::constant(3, 1.0), nl, 1.0).unwrap()
}

fn ppc_residual(t: f64) -> f64 {
    2.0 * t - t * t * t - 0.1
}

#[test]
fn power_three_reaches_two() {
    let out = mountain_pass(
        &path3(Nonlinearity::power(3.0).unwrap()),
        &SolverConfig::default(),
    )
    .unwrap();
    assert!((out.solution.u[1] - 2.0).abs() < 1e-8);
    assert!((out.solution.phi_value - 8.0 / 3.0).abs() < 1e-8);
}

#[test]
fn ppc_mountain_pass_takes_large_root() {
    let pr = path3(Nonlinearity::power_plus_const(4.0, 0.1).unwrap());
    let cfg = SolverConfig {
        waive_hypotheses: true,
        ..Default::default()
    };
    let out = mountain_pass(&pr, &cfg).unwrap();
    let root = bisect(ppc_residual, 1.0, 2.0);
    assert!(
        (out.solution.u[1] - root).abs() < 1e-8,
        "{} vs {root}",
        out.solution.u[1]
    );
}

#[test]
fn ball_minimizer_takes_small_root() {
    let pr = path3(Nonlinearity::power_plus_const(4.0, 0.1).unwrap());
    let cfg = SolverConfig {
        rho: Some(1.0),
        ..Default::default()
    };
    let out = ball_minimize(&pr, &cfg).unwrap();
    let root = bisect(ppc_residual, 0.0, 1.0);
    assert_eq!(out.solution.kind, SolutionKind::BallMin);
    assert!((out.solution.u[1] - root).abs() < 1e-8);
    assert!((out.solution.h_norm - 2.0 * root).abs() < 1e-8);
    assert_eq!(out.solution.in_ball, Some(true));
}

#[test]
fn tiny_ball_has_no_interior_minimizer() {
    let pr = path3(Nonlinearity::power_plus_const(4.0, 0.1).unwrap());
    let cfg = SolverConfig {
        rho: Some(0.005),
        ..Default::default()
    };
    match ball_minimize(&pr, &cfg) {
        Err(SolverError::NoInteriorMinimizer { h_norm, rho }) => {
            assert!((h_norm - rho.sqrt()).abs() < 1e-8);
        }
        other => panic!("expected sphere verdict, got {other:?}"),
    }
}

#[test]
fn two_solutions_radius_mode() {
    let pr = path3(Nonlinearity::power_plus_const(4.0, 0.1).unwrap());
    let rep = two_solutions(
        &pr,
        &SolverConfig::default(),
        TwoSolutionMode::Radius {
            rho: 1.0,
            beta: None,
        },
    )
    .unwrap();
    let small = bisect(ppc_residual, 0.0, 1.0);
    let large = bisect(ppc_residual, 1.0, 2.0);
    assert_eq!(rep.solutions.len(), 2);
    assert!((rep.solutions[0].u[1] - small).abs() < 1e-8);
    assert!((rep.solutions[1].u[1] - large).abs() < 1e-8);
    assert_eq!(rep.solutions[0].in_ball, Some(true));
    assert_eq!(rep.solutions[1].in_ball, Some(false));
    let ball = rep.ball.unwrap();
    assert!(ball.beta > 0.0 && ball.beta <= ball.beta_bound);
    for h in [
        Hypothesis::F1,
        Hypothesis::F3,
        Hypothesis::F4,
        Hypothesis::F7,
    ] {
        assert!(
            rep.hypothesis_verdicts.iter().any(|v| v.name == h),
            "{h} missing"
        );
    }
}

#[test]
fn two_solutions_level_mode_radius() {
    let pr = path3(Nonlinearity::power_plus_const(4.0, 0.1).unwrap());
    // μ_min = 1 and h0 = 1, so M0 = 1 gives ball radius² 1
    let rep = two_solutions(
        &pr,
        &SolverConfig::default(),
        TwoSolutionMode::Level {
            m0: 1.0,
            beta: None,
        },
    )
    .unwrap();
    let ball = rep.ball.unwrap();
    assert!((ball.rho - 1.0).abs() < 1e-15);
    assert!(rep
        .hypothesis_verdicts
        .iter()
        .any(|v| v.name == Hypothesis::F8 && v.holds));
    assert_eq!(rep.solutions[0].in_ball, Some(true));
}

#[test]
fn spike_phi_decreasing_past_four() {
    let pr = path3(Nonlinearity::power(4.0).unwrap());
    let mut prev = f64::INFINITY;
    for k in 0..200 {
        let t = 4.0 + 0.25 * k as f64;
        let phi = pr.phi(&GraphFunction::spike(3, 1, t)).unwrap();
        assert!(phi < 0.0 && phi < prev);
        prev = phi;
    }
    let e = build_spike_endpoint(&pr, &SolverConfig::default()).unwrap();
    assert!(e.phi <= 0.0);
}

#[test]
fn trace_maximum_nonincreasing_and_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = random_graph(&mut rng, 12, MeasureMode::Derived);
    let p = random_domain(&mut rng, &g);
    let n = g.len();
    let pr = Problem::new(
        g,
        p,
        GraphFunction::constant(n, 1.0),
        Nonlinearity::power(4.0).unwrap(),
        1.0,
    )
    .unwrap();
    let cfg = SolverConfig {
        seed: 3,
        ..Default::default()
    };
    let a = mountain_pass(&pr, &cfg).unwrap();
    let b = mountain_pass(&pr, &cfg).unwrap();
    assert_eq!(a.trace, b.trace);
    assert_eq!(a.solution, b.solution);
    for w in a.trace.windows(2) {
        assert!(w[1].phi <= w[0].phi + 1e-15 * w[0].phi.abs().max(1.0));
    }
}

#[test]
fn random_problems_converge_with_consistent_weak_residual() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let families = [
        Nonlinearity::power(4.0).unwrap(),
        Nonlinearity::power(3.0).unwrap(),
        Nonlinearity::odd_poly(&[(3, 1.0), (5, 0.5)]).unwrap(),
    ];
    for trial in 0..12 {
        let mode = if trial % 2 == 0 {
            MeasureMode::Derived
        } else {
            MeasureMode::Given
        };
        let g = random_graph(&mut rng, 6 + trial, mode);
        let p = random_domain(&mut rng, &g);
        let n = g.len();
        let h = GraphFunction((0..n).map(|i| 1.0 + (i % 3) as f64).collect());
        let nl = families[trial % 3].clone();
        let pr = Problem::new(g, p, h, nl, 1.0).unwrap();
        let cfg = SolverConfig {
            seed: trial as u64,
            ..Default::default()
        };
        let out = mountain_pass(&pr, &cfg).unwrap_or_else(|e| panic!("trial {trial}: {e}"));
        let s = &out.solution;
        assert!(
            s.converged && s.residual_max <= cfg.newton_tol,
            "trial {trial}"
        );
        assert!(
            s.phi_value >= cfg.deform_tol,
            "trial {trial}: {}",
            s.phi_value
        );
        assert!(
            s.weak_residual_max <= 10.0 * cfg.newton_tol,
            "trial {trial}: {}",
            s.weak_residual_max
        );
        assert!(s.u.is_dirichlet(&pr.partition));
        assert_eq!(weak_residual(&pr, &s.u, cfg.seed, 50), s.weak_residual_max);
    }
}

#[test]
fn scaling_leaves_solution_and_scales_phi() {
    let lambda = 3.5;
    let base = path3(Nonlinearity::power(4.0).unwrap());
    let g = base.graph.scaled(lambda).unwrap();
    let p = DomainPartition::compute_by_ids(&g, &["b"]).unwrap();
    let scaled = Problem::new(g, p, base.h.clone(), base.nl.clone(), 1.0).unwrap();
    let cfg = SolverConfig::default();
    let a = mountain_pass(&base, &cfg).unwrap().solution;
    let b = mountain_pass(&scaled, &cfg).unwrap().solution;
    assert!((a.u[1] - b.u[1]).abs() < 1e-10);
    assert!((b.phi_value - lambda * a.phi_value).abs() < 1e-10 * lambda);
}

#[test]
fn fixed_step_rule_also_converges() {
    let pr = path3(Nonlinearity::power(4.0).unwrap());
    let cfg = SolverConfig {
        step_rule: StepRule::Fixed { alpha: 0.1 },
        ..Default::default()
    };
    let out = mountain_pass(&pr, &cfg).unwrap();
    assert!((out.solution.u[1] - 2f64.sqrt()).abs() < 1e-8);
}

#[test]
fn solve_single_reports_verdicts_and_constants() {
    let pr = path3(Nonlinearity::power(4.0).unwrap().with_ar(4.0, 1.0));
    let cfg = SolverConfig {
        record_path_profile: true,
        ..Default::default()
    };
    let rep = solve_single(&pr, &cfg).unwrap();
    assert!((rep.lambda1 - 1.0).abs() < 1e-10);
    assert!(rep.ps_diagnostic || rep.iteration_trace.len() == 1);
    assert!(!rep.snapshots.is_empty());
    assert!(rep
        .hypothesis_verdicts
        .iter()
        .all(|v| !v.witness.is_empty()));
}

#[test]
fn mountain_pass_gate_rejects_without_waiver() {
    // f(u) = 0.1 + u|u|^2 fails F2, and F5/F6 do not rescue it
    let pr = path3(Nonlinearity::power_plus_const(4.0, 0.1).unwrap());
    assert!(matches!(
        mountain_pass(&pr, &SolverConfig::default()),
        Err(SolverError::Precondition { .. })
    ));
}

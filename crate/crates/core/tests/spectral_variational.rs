mod common;

use common::{path, random_dirichlet, random_domain, random_graph};
use graphpde_core::calculus::norm;
use graphpde_core::spectral::{constants, lambda1, lambda1_with_dense_limit, rayleigh_quotient};
use graphpde_core::{DomainPartition, GraphFunction, MeasureMode, Nonlinearity, NormKind, Problem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn path_eigenvalues() {
    let g = path(3);
    let p = DomainPartition::compute_by_ids(&g, &["b"]).unwrap();
    assert!((lambda1(&g, &p, 1e-12, 1000).unwrap().lambda1 - 1.0).abs() < 1e-10);
    let g = path(4);
    let p = DomainPartition::compute_by_ids(&g, &["b", "c"]).unwrap();
    assert!((lambda1(&g, &p, 1e-12, 1000).unwrap().lambda1 - 0.5).abs() < 1e-10);
}

#[test]
fn norm_equivalence_and_embedding_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for trial in 0..20 {
        let mode = if trial % 2 == 0 {
            MeasureMode::Derived
        } else {
            MeasureMode::Given
        };
        let n = rng.gen_range(5..=30);
        let g = random_graph(&mut rng, n, mode);
        let p = random_domain(&mut rng, &g);
        let h = GraphFunction((0..n).map(|_| rng.gen_range(1.0..3.0)).collect());
        let eig = lambda1(&g, &p, 1e-12, 10_000).unwrap();
        let c = constants(&g, &p, &h, 1.0, eig.lambda1).unwrap();
        for _ in 0..200 {
            let u = random_dirichlet(&mut rng, &p, 5.0);
            let full = norm(&g, &p, &u, NormKind::FullW12, None).unwrap();
            let dir = norm(&g, &p, &u, NormKind::DirichletW12, None).unwrap();
            let hn = norm(&g, &p, &u, NormKind::H, Some(&h)).unwrap();
            let slack = 1.0 + 1e-12;
            assert!(dir <= full * slack);
            assert!(full * full <= c.equiv_upper * dir * dir * slack);
            assert!(rayleigh_quotient(&g, &p, &u) >= eig.lambda1 / slack);
            let sup = norm(&g, &p, &u, NormKind::Lp(f64::INFINITY), None).unwrap();
            assert!(sup <= c.sup_embedding * hn * slack);
            for q in [1.0, 2.0, 3.5, 6.0] {
                let lq = norm(&g, &p, &u, NormKind::Lp(q), None).unwrap();
                assert!(lq <= c.lq_embedding(q) * hn * slack, "q = {q}");
            }
        }
    }
}

#[test]
fn inverse_iteration_agrees_with_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..5 {
        let g = random_graph(&mut rng, 40, MeasureMode::Given);
        let p = random_domain(&mut rng, &g);
        let dense = lambda1_with_dense_limit(&g, &p, 1e-12, 10_000, usize::MAX).unwrap();
        let iter = lambda1_with_dense_limit(&g, &p, 1e-12, 10_000, 0).unwrap();
        assert!((dense.lambda1 - iter.lambda1).abs() <= 1e-9 * dense.lambda1);
    }
}

fn random_problem(rng: &mut ChaCha8Rng, nl: Nonlinearity) -> Problem {
    let mode = if rng.gen_bool(0.5) {
        MeasureMode::Derived
    } else {
        MeasureMode::Given
    };
    let n = rng.gen_range(5..=20);
    let g = random_graph(rng, n, mode);
    let p = random_domain(rng, &g);
    let h = GraphFunction((0..n).map(|_| rng.gen_range(0.5..3.0)).collect());
    Problem::new(g, p, h, nl, 0.5).unwrap()
}

#[test]
fn gradient_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for trial in 0..50 {
        let nl = if trial % 2 == 0 {
            Nonlinearity::power(rng.gen_range(2.5..5.0)).unwrap()
        } else {
            Nonlinearity::odd_poly(&[(1, -0.5), (3, 1.0), (5, 0.2)]).unwrap()
        };
        let pr = random_problem(&mut rng, nl);
        let u = random_dirichlet(&mut rng, &pr.partition, 1.5);
        let grad = pr.gradient(&u).unwrap();
        for &x in pr.partition.omega() {
            let step = 1e-6 * u[x].abs().max(1.0);
            let mut up = u.clone();
            up[x] += step;
            let mut dn = u.clone();
            dn[x] -= step;
            let fd = (pr.phi(&up).unwrap() - pr.phi(&dn).unwrap()) / (2.0 * step);
            let err = (fd - grad[x]).abs() / grad[x].abs().max(1e-3);
            assert!(err <= 1e-6, "trial {trial} vertex {x}: {fd} vs {}", grad[x]);
        }
        // ⟨Φ'(u), δ_x⟩ = μ(x) r(x)
        let r = pr.pointwise_residual(&u).unwrap();
        for &x in pr.partition.omega() {
            let delta = GraphFunction::spike(pr.graph.len(), x, 1.0);
            let weak = pr.directional_derivative(&u, &delta).unwrap();
            let strong = pr.graph.measure(x) * r[x];
            assert!(
                (weak - strong).abs() <= 1e-12 * strong.abs().max(1.0),
                "trial {trial}"
            );
        }
    }
}

#[test]
fn phi_splits_into_derivative_and_primitive_gap() {
    // Φ(u) = ½⟨Φ'(u),u⟩ + ∫(½ f(u)u − F(u)) for any Dirichlet u
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..20 {
        let pr = random_problem(&mut rng, Nonlinearity::power(4.0).unwrap());
        let u = random_dirichlet(&mut rng, &pr.partition, 1.0);
        let lhs = pr.phi(&u).unwrap();
        let dd = pr.directional_derivative(&u, &u).unwrap();
        let tail: f64 = pr
            .partition
            .omega()
            .iter()
            .map(|&x| {
                pr.graph.measure(x) * (0.5 * pr.nl.f(x, u[x]) * u[x] - pr.nl.primitive(x, u[x]))
            })
            .sum();
        assert!((lhs - (0.5 * dd + tail)).abs() <= 1e-12 * lhs.abs().max(1.0));
    }
}

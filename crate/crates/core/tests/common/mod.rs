#![allow(dead_code)]

use graphpde_core::{
    DomainPartition, EdgeSpec, GraphFunction, MeasureMode, VertexSpec, WeightedGraph,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Connected graph: a random spanning tree plus extra random edges.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, mode: MeasureMode) -> WeightedGraph {
    let ids: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let vertices: Vec<VertexSpec> = ids
        .iter()
        .map(|id| match mode {
            MeasureMode::Derived => VertexSpec::auto(id.clone()),
            MeasureMode::Given => VertexSpec::with_measure(id.clone(), rng.gen_range(0.1..10.0)),
        })
        .collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        seen.insert((j, i));
        edges.push(EdgeSpec::new(
            ids[j].clone(),
            ids[i].clone(),
            rng.gen_range(0.1..10.0),
        ));
    }
    for _ in 0..n {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let key = (a.min(b), a.max(b));
        if a != b && seen.insert(key) {
            edges.push(EdgeSpec::new(
                ids[a].clone(),
                ids[b].clone(),
                rng.gen_range(0.1..10.0),
            ));
        }
    }
    WeightedGraph::build(&vertices, &edges, mode).unwrap()
}

/// Ω grown by BFS from a random vertex, leaving at least one vertex outside.
pub fn random_domain(rng: &mut ChaCha8Rng, g: &WeightedGraph) -> DomainPartition {
    let n = g.len();
    let size = rng.gen_range(1..n);
    let start = rng.gen_range(0..n);
    let mut omega = vec![start];
    let mut mark = vec![false; n];
    mark[start] = true;
    let mut head = 0;
    while omega.len() < size && head < omega.len() {
        let x = omega[head];
        head += 1;
        for &(y, _) in g.neighbors(x) {
            if !mark[y] && omega.len() < size {
                mark[y] = true;
                omega.push(y);
            }
        }
    }
    DomainPartition::compute(g, &omega).unwrap()
}

/// Random values on Ω, zero elsewhere.
pub fn random_dirichlet(rng: &mut ChaCha8Rng, p: &DomainPartition, scale: f64) -> GraphFunction {
    let vals: Vec<f64> = (0..p.interior_len())
        .map(|_| rng.gen_range(-scale..scale))
        .collect();
    p.extend_by_zero(&vals)
}

pub fn random_function(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> GraphFunction {
    GraphFunction((0..n).map(|_| rng.gen_range(-scale..scale)).collect())
}

pub fn path(n: usize) -> WeightedGraph {
    let ids: Vec<String> = (0..n)
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect();
    let vertices: Vec<VertexSpec> = ids.iter().map(|s| VertexSpec::auto(s.clone())).collect();
    let edges: Vec<EdgeSpec> = ids
        .windows(2)
        .map(|w| EdgeSpec::new(w[0].clone(), w[1].clone(), 1.0))
        .collect();
    WeightedGraph::build(&vertices, &edges, MeasureMode::Derived).unwrap()
}

/// Bisection for a sign change of `f` on [lo, hi].
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) < 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

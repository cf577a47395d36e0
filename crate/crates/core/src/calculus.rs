//! Discrete operators and norms on a weighted graph.
//!
//! All sums over neighbors run in stored edge order without compensation.
//! Functions are full vertex vectors; Dirichlet functions are expected to be
//! zero off Ω already (see [`DomainPartition::zero_extend`]).

use alloc::format;
use alloc::string::String;
use core::fmt;

use crate::graph::{DomainPartition, GraphFunction, Role, WeightedGraph};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    /// (∫_{Ω∪∂Ω} |∇u|² dμ + ∫_Ω u² dμ)^{1/2}
    FullW12,
    /// (∫_{Ω∪∂Ω} |∇u|² dμ)^{1/2}
    DirichletW12,
    /// (∫_{Ω∪∂Ω} |∇u|² dμ + ∫_Ω h u² dμ)^{1/2}
    H,
    /// L^p(Ω); `f64::INFINITY` selects the sup norm.
    Lp(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerKind {
    W12,
    H,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CalculusError {
    LengthMismatch {
        expected: usize,
        found: usize,
    },
    UnknownVertex(usize),
    NotDirichlet {
        vertex: String,
    },
    InvalidExponent(f64),
    MissingH,
    /// ‖u‖_H² came out negative, which means h is not admissible.
    NegativeRadicand(f64),
}

impl fmt::Display for CalculusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LengthMismatch { expected, found } => {
                write!(
                    f,
                    "function has {found} values, graph has {expected} vertices"
                )
            }
            Self::UnknownVertex(x) => write!(f, "vertex index {x} out of range"),
            Self::NotDirichlet { vertex } => {
                write!(f, "function is nonzero at {vertex}, outside the interior")
            }
            Self::InvalidExponent(p) => write!(f, "L^p exponent must satisfy p >= 1, got {p}"),
            Self::MissingH => write!(f, "h-weighted norm requested without h"),
            Self::NegativeRadicand(r) => {
                write!(f, "squared h-norm is negative ({r}); h is not admissible")
            }
        }
    }
}

impl core::error::Error for CalculusError {}

fn check_len(graph: &WeightedGraph, u: &GraphFunction) -> Result<(), CalculusError> {
    if u.len() != graph.len() {
        return Err(CalculusError::LengthMismatch {
            expected: graph.len(),
            found: u.len(),
        });
    }
    Ok(())
}

fn check_vertex(graph: &WeightedGraph, x: usize) -> Result<(), CalculusError> {
    if x >= graph.len() {
        return Err(CalculusError::UnknownVertex(x));
    }
    Ok(())
}

fn check_dirichlet(
    graph: &WeightedGraph,
    partition: &DomainPartition,
    u: &GraphFunction,
) -> Result<(), CalculusError> {
    check_len(graph, u)?;
    match u.dirichlet_violation(partition) {
        Some(x) => Err(CalculusError::NotDirichlet {
            vertex: graph.id(x).into(),
        }),
        None => Ok(()),
    }
}

pub(crate) fn laplacian_at(graph: &WeightedGraph, u: &[f64], x: usize) -> f64 {
    let ux = u[x];
    let s: f64 = graph
        .neighbors(x)
        .iter()
        .map(|&(y, w)| w * (u[y] - ux))
        .sum();
    s / graph.measure(x)
}

pub(crate) fn gamma_at(graph: &WeightedGraph, u: &[f64], v: &[f64], x: usize) -> f64 {
    let (ux, vx) = (u[x], v[x]);
    let s: f64 = graph
        .neighbors(x)
        .iter()
        .map(|&(y, w)| w * (u[y] - ux) * (v[y] - vx))
        .sum();
    s / (2.0 * graph.measure(x))
}

/// Δu(x) = (1/μ(x)) Σ_{y∼x} μ_xy (u(y) − u(x)).
pub fn laplacian(graph: &WeightedGraph, u: &GraphFunction, x: usize) -> Result<f64, CalculusError> {
    check_len(graph, u)?;
    check_vertex(graph, x)?;
    Ok(laplacian_at(graph, &u.0, x))
}

/// Δu at every vertex.
pub fn laplacian_all(
    graph: &WeightedGraph,
    u: &GraphFunction,
) -> Result<GraphFunction, CalculusError> {
    check_len(graph, u)?;
    Ok(GraphFunction(
        (0..graph.len())
            .map(|x| laplacian_at(graph, &u.0, x))
            .collect(),
    ))
}

/// Γ(u,v)(x) = (1/(2μ(x))) Σ_{y∼x} μ_xy (u(y) − u(x))(v(y) − v(x)).
pub fn gradient_form(
    graph: &WeightedGraph,
    u: &GraphFunction,
    v: &GraphFunction,
    x: usize,
) -> Result<f64, CalculusError> {
    check_len(graph, u)?;
    check_len(graph, v)?;
    check_vertex(graph, x)?;
    Ok(gamma_at(graph, &u.0, &v.0, x))
}

/// |∇u|(x) = Γ(u,u)(x)^{1/2}.
pub fn gradient_length(
    graph: &WeightedGraph,
    u: &GraphFunction,
    x: usize,
) -> Result<f64, CalculusError> {
    gradient_form(graph, u, u, x).map(math::sqrt)
}

/// Σ_{x ∈ region} μ(x) f(x).
pub fn integrate(
    graph: &WeightedGraph,
    f: &GraphFunction,
    region: &[usize],
) -> Result<f64, CalculusError> {
    check_len(graph, f)?;
    region.iter().try_fold(0.0, |acc, &x| {
        check_vertex(graph, x)?;
        Ok(acc + graph.measure(x) * f.0[x])
    })
}

/// ∫_{Ω∪∂Ω} Γ(u,v) dμ as a per-vertex sum.
pub(crate) fn gamma_integral(
    graph: &WeightedGraph,
    partition: &DomainPartition,
    u: &[f64],
    v: &[f64],
) -> f64 {
    let mut s = 0.0;
    for x in 0..graph.len() {
        if partition.role(x) != Role::Exterior {
            s += graph.measure(x) * gamma_at(graph, u, v, x);
        }
    }
    s
}

/// ∫_{Ω∪∂Ω} |∇u|² dμ evaluated vertex by vertex through Γ.
pub fn dirichlet_energy(
    graph: &WeightedGraph,
    partition: &DomainPartition,
    u: &GraphFunction,
) -> Result<f64, CalculusError> {
    check_len(graph, u)?;
    Ok(gamma_integral(graph, partition, &u.0, &u.0))
}

/// The same energy assembled edge by edge: Σ μ_xy (u(y) − u(x))² over edges
/// with both endpoints in Ω ∪ ∂Ω. Agrees with [`dirichlet_energy`] for
/// Dirichlet functions.
pub fn dirichlet_energy_edges(
    graph: &WeightedGraph,
    partition: &DomainPartition,
    u: &GraphFunction,
) -> Result<f64, CalculusError> {
    check_len(graph, u)?;
    Ok(graph
        .edges()
        .iter()
        .filter(|&&(a, b, _)| {
            partition.role(a) != Role::Exterior && partition.role(b) != Role::Exterior
        })
        .map(|&(a, b, w)| {
            let d = u.0[b] - u.0[a];
            w * d * d
        })
        .sum())
}

pub(crate) fn weighted_mass(
    graph: &WeightedGraph,
    partition: &DomainPartition,
    u: &[f64],
    v: &[f64],
    h: Option<&[f64]>,
) -> f64 {
    partition
        .omega()
        .iter()
        .map(|&x| graph.measure(x) * h.map_or(1.0, |h| h[x]) * u[x] * v[x])
        .sum()
}

/// Evaluates the requested norm of `u`. The Sobolev and H norms require a
/// Dirichlet function; the H norm also requires `h`.
pub fn norm(
    graph: &WeightedGraph,
    partition: &DomainPartition,
    u: &GraphFunction,
    kind: NormKind,
    h: Option<&GraphFunction>,
) -> Result<f64, CalculusError> {
    match kind {
        NormKind::Lp(p) => {
            check_len(graph, u)?;
            lp_norm(graph, partition, &u.0, p)
        }
        NormKind::DirichletW12 | NormKind::FullW12 | NormKind::H => {
            check_dirichlet(graph, partition, u)?;
            let energy = gamma_integral(graph, partition, &u.0, &u.0);
            let sq = match kind {
                NormKind::DirichletW12 => energy,
                NormKind::FullW12 => energy + weighted_mass(graph, partition, &u.0, &u.0, None),
                _ => {
                    let h = h.ok_or(CalculusError::MissingH)?;
                    check_len(graph, h)?;
                    energy + weighted_mass(graph, partition, &u.0, &u.0, Some(&h.0))
                }
            };
            if sq < 0.0 {
                return Err(CalculusError::NegativeRadicand(sq));
            }
            Ok(math::sqrt(sq))
        }
    }
}

pub(crate) fn lp_norm(
    graph: &WeightedGraph,
    partition: &DomainPartition,
    u: &[f64],
    p: f64,
) -> Result<f64, CalculusError> {
    if p.is_nan() || p < 1.0 {
        return Err(CalculusError::InvalidExponent(p));
    }
    if p == f64::INFINITY {
        return Ok(partition
            .omega()
            .iter()
            .map(|&x| math::abs(u[x]))
            .fold(0.0, f64::max));
    }
    let s: f64 = partition
        .omega()
        .iter()
        .map(|&x| graph.measure(x) * math::powf(math::abs(u[x]), p))
        .sum();
    Ok(math::powf(s, 1.0 / p))
}

/// ⟨u,v⟩ = ∫_{Ω∪∂Ω} Γ(u,v) dμ + ∫_Ω (1 or h) u v dμ.
pub fn inner_product(
    graph: &WeightedGraph,
    partition: &DomainPartition,
    u: &GraphFunction,
    v: &GraphFunction,
    kind: InnerKind,
    h: Option<&GraphFunction>,
) -> Result<f64, CalculusError> {
    check_dirichlet(graph, partition, u)?;
    check_dirichlet(graph, partition, v)?;
    let weight = match kind {
        InnerKind::W12 => None,
        InnerKind::H => {
            let h = h.ok_or(CalculusError::MissingH)?;
            check_len(graph, h)?;
            Some(h.0.as_slice())
        }
    };
    Ok(gamma_integral(graph, partition, &u.0, &v.0)
        + weighted_mass(graph, partition, &u.0, &v.0, weight))
}

/// Signed residual of Green's identity
/// ∫_{Ω∪∂Ω} Γ(u,v) dμ + ∫_Ω (Δu) v dμ, for `v` supported in Ω.
pub fn green_residual(
    graph: &WeightedGraph,
    partition: &DomainPartition,
    u: &GraphFunction,
    v: &GraphFunction,
) -> Result<f64, CalculusError> {
    check_len(graph, u)?;
    check_dirichlet(graph, partition, v)?;
    let gamma_side = gamma_integral(graph, partition, &u.0, &v.0);
    let lap_side: f64 = partition
        .omega()
        .iter()
        .map(|&x| graph.measure(x) * laplacian_at(graph, &u.0, x) * v.0[x])
        .sum();
    Ok(gamma_side + lap_side)
}

/// The sum of |u| over Ω weighted by μ; used to normalize weak residuals.
pub(crate) fn l1_norm(graph: &WeightedGraph, partition: &DomainPartition, u: &[f64]) -> f64 {
    partition
        .omega()
        .iter()
        .map(|&x| graph.measure(x) * math::abs(u[x]))
        .sum()
}

impl NormKind {
    /// Short label used in reports.
    pub fn name(self) -> String {
        match self {
            NormKind::FullW12 => "full_w12".into(),
            NormKind::DirichletW12 => "dirichlet_w12".into(),
            NormKind::H => "h_norm".into(),
            NormKind::Lp(p) if p == f64::INFINITY => "l_inf".into(),
            NormKind::Lp(p) => format!("l{p}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{EdgeSpec, MeasureMode, VertexSpec};
    use alloc::vec;

    fn path3() -> (WeightedGraph, DomainPartition) {
        let g = WeightedGraph::build(
            &["a", "b", "c"].map(VertexSpec::auto),
            &[EdgeSpec::new("a", "b", 1.0), EdgeSpec::new("b", "c", 1.0)],
            MeasureMode::Derived,
        )
        .unwrap();
        let p = DomainPartition::compute_by_ids(&g, &["b"]).unwrap();
        (g, p)
    }

    fn edge() -> WeightedGraph {
        WeightedGraph::build(
            &[
                VertexSpec::with_measure("a", 1.0),
                VertexSpec::with_measure("b", 1.0),
            ],
            &[EdgeSpec::new("a", "b", 1.0)],
            MeasureMode::Given,
        )
        .unwrap()
    }

    #[test]
    fn laplacian_examples() {
        let g = edge();
        let u = GraphFunction(vec![0.0, 1.0]);
        assert_eq!(laplacian(&g, &u, 0).unwrap(), 1.0);
        assert_eq!(laplacian(&g, &u, 1).unwrap(), -1.0);
        let c = GraphFunction::constant(2, 3.5);
        assert_eq!(laplacian_all(&g, &c).unwrap().0, vec![0.0, 0.0]);

        let (g, _) = path3();
        let t = 0.7;
        let u = GraphFunction(vec![0.0, t, 0.0]);
        assert_eq!(laplacian(&g, &u, 1).unwrap(), -t);
        assert!(laplacian(&g, &u, 5).is_err());
        assert!(laplacian(&g, &GraphFunction(vec![0.0]), 0).is_err());
    }

    #[test]
    fn gradient_form_examples() {
        let g = edge();
        let u = GraphFunction(vec![0.0, 1.0]);
        assert_eq!(gradient_form(&g, &u, &u, 0).unwrap(), 0.5);
        let c = GraphFunction::constant(2, -2.0);
        assert_eq!(gradient_form(&g, &u, &c, 0).unwrap(), 0.0);
        assert_eq!(gradient_form(&g, &u, &c, 1).unwrap(), 0.0);
        assert!(
            (gradient_length(&g, &u, 0).unwrap() - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15
        );
        assert_eq!(gradient_length(&g, &c, 1).unwrap(), 0.0);

        let (g, _) = path3();
        let u = GraphFunction(vec![0.0, 1.0, 0.0]);
        assert!((gradient_length(&g, &u, 1).unwrap() - math::sqrt(0.5)).abs() < 1e-15);
    }

    #[test]
    fn integrate_examples() {
        let (g, p) = path3();
        assert_eq!(
            integrate(&g, &GraphFunction::constant(3, 1.0), p.omega()).unwrap(),
            2.0
        );
        assert_eq!(
            integrate(&g, &GraphFunction::zeros(3), p.omega()).unwrap(),
            0.0
        );
        let e = edge();
        assert_eq!(
            integrate(&e, &GraphFunction(vec![1.0, 2.0]), &[0, 1]).unwrap(),
            3.0
        );
        assert!(integrate(&e, &GraphFunction(vec![1.0, 2.0]), &[7]).is_err());
    }

    #[test]
    fn norm_examples() {
        let (g, p) = path3();
        let u = GraphFunction(vec![0.0, 1.0, 0.0]);
        let h = GraphFunction::constant(3, 1.0);
        let d = norm(&g, &p, &u, NormKind::DirichletW12, None).unwrap();
        assert!((d - math::sqrt(2.0)).abs() < 1e-15);
        assert_eq!(norm(&g, &p, &u, NormKind::FullW12, None).unwrap(), 2.0);
        assert_eq!(norm(&g, &p, &u, NormKind::H, Some(&h)).unwrap(), 2.0);
        assert_eq!(
            norm(&g, &p, &u, NormKind::Lp(f64::INFINITY), None).unwrap(),
            1.0
        );
        assert_eq!(
            norm(&g, &p, &u, NormKind::Lp(2.0), None).unwrap(),
            math::sqrt(2.0)
        );

        let z = GraphFunction::zeros(3);
        for kind in [
            NormKind::DirichletW12,
            NormKind::FullW12,
            NormKind::H,
            NormKind::Lp(1.0),
            NormKind::Lp(f64::INFINITY),
        ] {
            assert_eq!(
                norm(&g, &p, &z, kind, Some(&h)).unwrap(),
                0.0,
                "{}",
                kind.name()
            );
        }
    }

    #[test]
    fn norm_errors() {
        let (g, p) = path3();
        let u = GraphFunction(vec![0.0, 1.0, 0.0]);
        assert_eq!(
            norm(&g, &p, &u, NormKind::H, None),
            Err(CalculusError::MissingH)
        );
        let bad_h = GraphFunction::constant(3, -5.0);
        assert!(matches!(
            norm(&g, &p, &u, NormKind::H, Some(&bad_h)),
            Err(CalculusError::NegativeRadicand(_))
        ));
        let leaky = GraphFunction(vec![1.0, 1.0, 0.0]);
        assert!(matches!(
            norm(&g, &p, &leaky, NormKind::FullW12, None),
            Err(CalculusError::NotDirichlet { .. })
        ));
        assert!(matches!(
            norm(&g, &p, &u, NormKind::Lp(0.5), None),
            Err(CalculusError::InvalidExponent(_))
        ));
    }

    #[test]
    fn green_examples() {
        let (g, p) = path3();
        let t = 1.3;
        let u = GraphFunction(vec![0.0, t, 0.0]);
        assert!((gamma_integral(&g, &p, &u.0, &u.0) - 2.0 * t * t).abs() < 1e-14);
        assert!(green_residual(&g, &p, &u, &u).unwrap().abs() < 1e-14);
        let c = GraphFunction::constant(3, 4.0);
        assert_eq!(green_residual(&g, &p, &c, &u).unwrap(), 0.0);
        let leaky = GraphFunction(vec![1.0, 0.0, 0.0]);
        assert!(green_residual(&g, &p, &u, &leaky).is_err());
    }

    #[test]
    fn inner_product_matches_norm() {
        let (g, p) = path3();
        let h = GraphFunction::constant(3, 1.5);
        let u = GraphFunction(vec![0.0, -0.8, 0.0]);
        let w = inner_product(&g, &p, &u, &u, InnerKind::W12, None).unwrap();
        let n = norm(&g, &p, &u, NormKind::FullW12, None).unwrap();
        assert!((w - n * n).abs() < 1e-14);
        let hh = inner_product(&g, &p, &u, &u, InnerKind::H, Some(&h)).unwrap();
        let nh = norm(&g, &p, &u, NormKind::H, Some(&h)).unwrap();
        assert!((hh - nh * nh).abs() < 1e-14);
        let z = GraphFunction::zeros(3);
        assert_eq!(
            inner_product(&g, &p, &u, &z, InnerKind::H, Some(&h)).unwrap(),
            0.0
        );
    }
}

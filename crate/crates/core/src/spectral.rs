//! First Dirichlet eigenvalue and the constants derived from it.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::calculus;
use crate::graph::{DomainPartition, GraphFunction, WeightedGraph};
use crate::linalg::{self, Dense};
use crate::math;

/// Interior sizes up to this use the dense Jacobi route.
pub const DENSE_LIMIT: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralError {
    EmptyBoundary,
    Disconnected,
    NoConvergence {
        iterations: usize,
        residual: f64,
    },
    NonpositiveH0(f64),
    LengthMismatch,
    /// Neither the lower bound h ≥ h0 nor the integral bound on h holds.
    HypothesisNotMet,
    /// μ_min h0 ∫_Ω h dμ ≥ 1 in the integral-bound branch.
    DegenerateKappa {
        product: f64,
    },
}

impl fmt::Display for SpectralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyBoundary => {
                write!(f, "boundary is empty; the Dirichlet quotient degenerates")
            }
            Self::Disconnected => write!(f, "interior plus boundary is not connected"),
            Self::NoConvergence {
                iterations,
                residual,
            } => write!(
                f,
                "eigensolver did not converge in {iterations} iterations (residual {residual:e})"
            ),
            Self::NonpositiveH0(h0) => write!(f, "h0 must be positive, got {h0}"),
            Self::LengthMismatch => write!(f, "h has the wrong number of values"),
            Self::HypothesisNotMet => {
                write!(
                    f,
                    "h satisfies neither h >= h0 on the interior nor the integral bound"
                )
            }
            Self::DegenerateKappa { product } => write!(
                f,
                "mu_min * h0 * integral(h) = {product} >= 1, the integral-bound kappa is undefined"
            ),
        }
    }
}

impl core::error::Error for SpectralError {}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EigenResult {
    pub lambda1: f64,
    /// Dirichlet eigenfunction with ∫_Ω u² dμ = 1, first nonzero entry positive.
    pub eigenfunction: GraphFunction,
    pub iterations: usize,
    /// ‖L u − λ M u‖₂ over the interior.
    pub residual: f64,
}

/// Applies the weighted Dirichlet Laplacian restricted to interior unknowns:
/// (L u)_x = Σ_{y∼x} μ_xy (u_x − u_y) with u = 0 off Ω.
pub(crate) fn apply_dirichlet_laplacian(
    graph: &WeightedGraph,
    partition: &DomainPartition,
    u: &[f64],
    out: &mut [f64],
) {
    for (k, &x) in partition.omega().iter().enumerate() {
        let mut s = 0.0;
        for &(y, w) in graph.neighbors(x) {
            let uy = partition.interior_slot(y).map_or(0.0, |j| u[j]);
            s += w * (u[k] - uy);
        }
        out[k] = s;
    }
}

pub(crate) fn dirichlet_laplacian_dense(
    graph: &WeightedGraph,
    partition: &DomainPartition,
) -> Dense {
    let m = partition.interior_len();
    let mut l = Dense::zeros(m);
    for (k, &x) in partition.omega().iter().enumerate() {
        for &(y, w) in graph.neighbors(x) {
            l.add(k, k, w);
            if let Some(j) = partition.interior_slot(y) {
                l.add(k, j, -w);
            }
        }
    }
    l
}

/// ∫_{Ω∪∂Ω} |∇u|² dμ / ∫_Ω u² dμ for a Dirichlet function.
pub fn rayleigh_quotient(
    graph: &WeightedGraph,
    partition: &DomainPartition,
    u: &GraphFunction,
) -> f64 {
    let energy = calculus::gamma_integral(graph, partition, &u.0, &u.0);
    let mass = calculus::weighted_mass(graph, partition, &u.0, &u.0, None);
    energy / mass
}

/// Smallest λ with L u = λ M u on the interior unknowns, M = diag(μ).
pub fn lambda1(
    graph: &WeightedGraph,
    partition: &DomainPartition,
    tolerance: f64,
    max_iterations: usize,
) -> Result<EigenResult, SpectralError> {
    lambda1_with_dense_limit(graph, partition, tolerance, max_iterations, DENSE_LIMIT)
}

/// [`lambda1`] with an explicit switch-over size between the dense Jacobi
/// route and inverse iteration.
pub fn lambda1_with_dense_limit(
    graph: &WeightedGraph,
    partition: &DomainPartition,
    tolerance: f64,
    max_iterations: usize,
    dense_limit: usize,
) -> Result<EigenResult, SpectralError> {
    if partition.boundary().is_empty() {
        return Err(SpectralError::EmptyBoundary);
    }
    if !partition.is_connected() {
        return Err(SpectralError::Disconnected);
    }
    let m = partition.interior_len();
    let mass: Vec<f64> = partition
        .omega()
        .iter()
        .map(|&x| graph.measure(x))
        .collect();

    let (lambda, mut u, iterations) = if m <= dense_limit {
        let l = dirichlet_laplacian_dense(graph, partition);
        let mut a = Dense::zeros(m);
        for i in 0..m {
            for j in 0..m {
                a.set(i, j, l.get(i, j) / math::sqrt(mass[i] * mass[j]));
            }
        }
        let sweeps = max_iterations.max(1);
        let (vals, vecs, used) = linalg::jacobi_eigen(a, 1e-15 * (m as f64).max(1.0), sweeps)
            .ok_or(SpectralError::NoConvergence {
                iterations: sweeps,
                residual: f64::NAN,
            })?;
        let mut k = 0;
        for i in 1..m {
            if vals[i] < vals[k] {
                k = i;
            }
        }
        let u: Vec<f64> = (0..m)
            .map(|i| vecs.get(i, k) / math::sqrt(mass[i]))
            .collect();
        (vals[k], u, used)
    } else {
        inverse_iteration(graph, partition, &mass, tolerance, max_iterations)?
    };

    // normalize ∫_Ω u² dμ = 1 and fix the sign
    let norm = math::sqrt(u.iter().zip(&mass).map(|(v, w)| w * v * v).sum());
    let scale = math::max_abs(&u) / norm;
    let first = u
        .iter()
        .position(|v| math::abs(*v) / norm > 1e-12 * scale)
        .unwrap_or(0);
    let sign = if u[first] < 0.0 { -1.0 } else { 1.0 };
    for v in &mut u {
        *v *= sign / norm;
    }

    let mut lu = vec![0.0; m];
    apply_dirichlet_laplacian(graph, partition, &u, &mut lu);
    let residual = math::sqrt(
        (0..m)
            .map(|k| {
                let r = lu[k] - lambda * mass[k] * u[k];
                r * r
            })
            .sum(),
    );

    Ok(EigenResult {
        lambda1: lambda,
        eigenfunction: partition.extend_by_zero(&u),
        iterations,
        residual,
    })
}

fn inverse_iteration(
    graph: &WeightedGraph,
    partition: &DomainPartition,
    mass: &[f64],
    tolerance: f64,
    max_iterations: usize,
) -> Result<(f64, Vec<f64>, usize), SpectralError> {
    let m = mass.len();
    let apply = |x: &[f64], y: &mut [f64]| apply_dirichlet_laplacian(graph, partition, x, y);
    let mut v = vec![1.0; m];
    let mut lv = vec![0.0; m];
    let mut rel = f64::INFINITY;
    for it in 1..=max_iterations {
        let rhs: Vec<f64> = v.iter().zip(mass).map(|(a, w)| a * w).collect();
        let w = linalg::conjugate_gradient(apply, &rhs, 1e-14, 20 * m + 100).ok_or(
            SpectralError::NoConvergence {
                iterations: it,
                residual: rel,
            },
        )?;
        let wnorm = math::sqrt(w.iter().zip(mass).map(|(a, m)| m * a * a).sum());
        v = w.iter().map(|a| a / wnorm).collect();
        apply(&v, &mut lv);
        let lambda: f64 = v.iter().zip(&lv).map(|(a, b)| a * b).sum();
        let mv_norm = math::sqrt(v.iter().zip(mass).map(|(a, w)| (a * w) * (a * w)).sum());
        let res = math::sqrt(
            (0..m)
                .map(|k| {
                    let r = lv[k] - lambda * mass[k] * v[k];
                    r * r
                })
                .sum(),
        );
        rel = res / (lambda * mv_norm);
        if rel <= tolerance {
            return Ok((lambda, v, it));
        }
    }
    Err(SpectralError::NoConvergence {
        iterations: max_iterations,
        residual: rel,
    })
}

/// Which expression produced [`ConstantsReport::kappa`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum KappaBranch {
    /// h ≥ h0 on Ω: κ = (μ_min h0)^{1/2}.
    LowerBound,
    /// ∫_Ω h dμ ≤ 1/(μ_min h0): κ = (μ_min h0)^{1/2} / (1 − μ_min h0 ∫_Ω h dμ)^{1/2}.
    IntegralBound,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConstantsReport {
    pub lambda1: f64,
    /// 1 + 1/λ₁: ‖u‖²_{full} ≤ (1 + 1/λ₁) ‖u‖²_{dirichlet}.
    pub equiv_upper: f64,
    pub mu_min: f64,
    pub h0: f64,
    /// Σ_{x∈Ω} μ(x).
    pub omega_measure: f64,
    pub h_integral: f64,
    /// (1/(μ_min h0))^{1/2}: ‖u‖_∞ ≤ sup_embedding · ‖u‖_H.
    pub sup_embedding: f64,
    /// (μ_min h0)^{1/2}.
    pub kappa_lower_bound: f64,
    /// Integral-bound κ, when its denominator is positive.
    pub kappa_integral_bound: Option<f64>,
    pub kappa: f64,
    pub kappa_branch: KappaBranch,
}

impl ConstantsReport {
    /// (Σ_{x∈Ω} μ(x))^{1/q} · sup_embedding, bounding ‖u‖_{L^q(Ω)} by ‖u‖_H.
    pub fn lq_embedding(&self, q: f64) -> f64 {
        math::powf(self.omega_measure, 1.0 / q) * self.sup_embedding
    }
}

/// Norm-equivalence and embedding constants together with κ.
///
/// κ uses the lower-bound branch when min_Ω h ≥ h0, otherwise the
/// integral-bound branch when ∫_Ω h dμ ≤ 1/(μ_min h0).
pub fn constants(
    graph: &WeightedGraph,
    partition: &DomainPartition,
    h: &GraphFunction,
    h0: f64,
    lambda1: f64,
) -> Result<ConstantsReport, SpectralError> {
    if !(h0 > 0.0) {
        return Err(SpectralError::NonpositiveH0(h0));
    }
    if h.len() != graph.len() {
        return Err(SpectralError::LengthMismatch);
    }
    let mu_min = graph.mu_min();
    let omega_measure: f64 = partition.omega().iter().map(|&x| graph.measure(x)).sum();
    let h_integral: f64 = partition
        .omega()
        .iter()
        .map(|&x| graph.measure(x) * h[x])
        .sum();
    let h_min = partition
        .omega()
        .iter()
        .map(|&x| h[x])
        .fold(f64::INFINITY, f64::min);

    let product = mu_min * h0 * h_integral;
    let kappa_lower_bound = math::sqrt(mu_min * h0);
    let kappa_integral_bound =
        (product < 1.0).then(|| kappa_lower_bound / math::sqrt(1.0 - product));

    let (kappa, kappa_branch) = if h_min >= h0 {
        (kappa_lower_bound, KappaBranch::LowerBound)
    } else if h_integral <= 1.0 / (mu_min * h0) {
        match kappa_integral_bound {
            Some(k) => (k, KappaBranch::IntegralBound),
            None => return Err(SpectralError::DegenerateKappa { product }),
        }
    } else {
        return Err(SpectralError::HypothesisNotMet);
    };

    Ok(ConstantsReport {
        lambda1,
        equiv_upper: 1.0 + 1.0 / lambda1,
        mu_min,
        h0,
        omega_measure,
        h_integral,
        sup_embedding: math::sqrt(1.0 / (mu_min * h0)),
        kappa_lower_bound,
        kappa_integral_bound,
        kappa,
        kappa_branch,
    })
}

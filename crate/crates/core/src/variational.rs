//! The energy functional, its derivatives and residuals, and the constants
//! that size the ball used by the two-solution pipeline.

use alloc::vec::Vec;
use core::fmt;

use crate::calculus::{self, CalculusError};
use crate::graph::{DomainPartition, GraphFunction, WeightedGraph};
use crate::linalg::Dense;
use crate::math;
use crate::nonlinearity::{self, check_h, HCheck, Nonlinearity};

#[derive(Debug, Clone, PartialEq)]
pub enum VariationalError {
    Calculus(CalculusError),
    LengthMismatch,
    Disconnected,
    EmptyBoundary,
    NonpositiveH0(f64),
    /// h satisfies neither the lower bound nor the integral bound.
    AdmissibilityFailed,
    NonpositiveRho(f64),
    /// μ_min h0 ∫_Ω h dμ ≥ 1.
    DegenerateKappa {
        product: f64,
    },
}

impl fmt::Display for VariationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Calculus(e) => e.fmt(f),
            Self::LengthMismatch => write!(f, "h, graph and partition sizes disagree"),
            Self::Disconnected => write!(f, "interior plus boundary is not connected"),
            Self::EmptyBoundary => write!(f, "interior has no boundary vertices"),
            Self::NonpositiveH0(h0) => write!(f, "h0 must be positive, got {h0}"),
            Self::AdmissibilityFailed => write!(
                f,
                "h satisfies neither h >= h0 (H1) nor integral(h) <= 1/(mu_min h0) (H3)"
            ),
            Self::NonpositiveRho(r) => write!(f, "ball radius squared must be positive, got {r}"),
            Self::DegenerateKappa { product } => {
                write!(
                    f,
                    "mu_min * h0 * integral(h) = {product} >= 1, kappa undefined"
                )
            }
        }
    }
}

impl core::error::Error for VariationalError {}

impl From<CalculusError> for VariationalError {
    fn from(e: CalculusError) -> Self {
        Self::Calculus(e)
    }
}

/// −Δu + h u = f(x,u) on Ω with u = 0 off Ω.
#[derive(Debug, Clone)]
pub struct Problem {
    pub graph: WeightedGraph,
    pub partition: DomainPartition,
    pub h: GraphFunction,
    pub nl: Nonlinearity,
    pub h0: f64,
}

impl Problem {
    /// Validates sizes, connectivity of Ω ∪ ∂Ω, and that h meets either the
    /// lower bound h ≥ h0 or the integral bound ∫_Ω h dμ ≤ 1/(μ_min h0).
    pub fn new(
        graph: WeightedGraph,
        partition: DomainPartition,
        h: GraphFunction,
        nl: Nonlinearity,
        h0: f64,
    ) -> Result<Self, VariationalError> {
        if h.len() != graph.len() || partition.roles().len() != graph.len() {
            return Err(VariationalError::LengthMismatch);
        }
        if !partition.is_connected() {
            return Err(VariationalError::Disconnected);
        }
        if partition.boundary().is_empty() {
            return Err(VariationalError::EmptyBoundary);
        }
        if !(h0 > 0.0) {
            return Err(VariationalError::NonpositiveH0(h0));
        }
        let h1 = check_h(&graph, &partition, &h, HCheck::H1 { h0 });
        let h3 = check_h(&graph, &partition, &h, HCheck::H3 { h0 });
        if !h1.holds && !h3.holds {
            return Err(VariationalError::AdmissibilityFailed);
        }
        Ok(Self {
            graph,
            partition,
            h,
            nl,
            h0,
        })
    }

    pub fn interior_len(&self) -> usize {
        self.partition.interior_len()
    }

    fn dirichlet(&self, u: &GraphFunction) -> Result<(), VariationalError> {
        if u.len() != self.graph.len() {
            return Err(VariationalError::LengthMismatch);
        }
        match u.dirichlet_violation(&self.partition) {
            Some(x) => Err(CalculusError::NotDirichlet {
                vertex: self.graph.id(x).into(),
            }
            .into()),
            None => Ok(()),
        }
    }

    /// ‖u‖_H² = ∫_{Ω∪∂Ω} |∇u|² dμ + ∫_Ω h u² dμ.
    pub(crate) fn h_norm_sq_raw(&self, u: &[f64]) -> f64 {
        calculus::gamma_integral(&self.graph, &self.partition, u, u)
            + calculus::weighted_mass(&self.graph, &self.partition, u, u, Some(&self.h.0))
    }

    pub(crate) fn phi_raw(&self, u: &[f64]) -> f64 {
        let potential: f64 = self
            .partition
            .omega()
            .iter()
            .map(|&x| self.graph.measure(x) * self.nl.primitive(x, u[x]))
            .sum();
        0.5 * self.h_norm_sq_raw(u) - potential
    }

    pub(crate) fn residual_at(&self, u: &[f64], x: usize) -> f64 {
        -calculus::laplacian_at(&self.graph, u, x) + self.h[x] * u[x] - self.nl.f(x, u[x])
    }

    /// Gradient on interior unknowns, ordered like `partition.omega()`.
    pub(crate) fn gradient_raw(&self, u: &[f64]) -> Vec<f64> {
        self.partition
            .omega()
            .iter()
            .map(|&x| self.graph.measure(x) * self.residual_at(u, x))
            .collect()
    }

    pub(crate) fn residual_raw(&self, u: &[f64]) -> Vec<f64> {
        self.partition
            .omega()
            .iter()
            .map(|&x| self.residual_at(u, x))
            .collect()
    }

    /// Jacobian of [`gradient_raw`](Self::gradient_raw): the weighted
    /// Dirichlet Laplacian plus diag(μ(x)(h(x) − f_u(x,u(x)))).
    pub(crate) fn jacobian_raw(&self, u: &[f64]) -> Dense {
        let mut j = crate::spectral::dirichlet_laplacian_dense(&self.graph, &self.partition);
        for (k, &x) in self.partition.omega().iter().enumerate() {
            let fu = self.nl.evaluate(x, u[x]).2;
            j.add(k, k, self.graph.measure(x) * (self.h[x] - fu));
        }
        j
    }

    /// Φ(u) = ½‖u‖_H² − ∫_Ω F(x,u) dμ.
    pub fn phi(&self, u: &GraphFunction) -> Result<f64, VariationalError> {
        self.dirichlet(u)?;
        Ok(self.phi_raw(&u.0))
    }

    /// ∂Φ/∂u(x) = μ(x)(−Δu + h u − f(x,u))(x) on Ω, zero elsewhere.
    pub fn gradient(&self, u: &GraphFunction) -> Result<GraphFunction, VariationalError> {
        self.dirichlet(u)?;
        Ok(self.partition.extend_by_zero(&self.gradient_raw(&u.0)))
    }

    /// r(x) = −Δu(x) + h(x)u(x) − f(x,u(x)) on Ω, zero elsewhere.
    pub fn pointwise_residual(&self, u: &GraphFunction) -> Result<GraphFunction, VariationalError> {
        self.dirichlet(u)?;
        Ok(self.partition.extend_by_zero(&self.residual_raw(&u.0)))
    }

    /// ⟨Φ'(u), φ⟩ = ∫_{Ω∪∂Ω} Γ(u,φ) dμ + ∫_Ω h u φ dμ − ∫_Ω f(x,u) φ dμ.
    pub fn directional_derivative(
        &self,
        u: &GraphFunction,
        phi_test: &GraphFunction,
    ) -> Result<f64, VariationalError> {
        self.dirichlet(u)?;
        self.dirichlet(phi_test)?;
        Ok(self.directional_raw(&u.0, &phi_test.0))
    }

    pub(crate) fn directional_raw(&self, u: &[f64], v: &[f64]) -> f64 {
        let g = &self.graph;
        let p = &self.partition;
        let forcing: f64 = p
            .omega()
            .iter()
            .map(|&x| g.measure(x) * self.nl.f(x, u[x]) * v[x])
            .sum();
        calculus::gamma_integral(g, p, u, v) + calculus::weighted_mass(g, p, u, v, Some(&self.h.0))
            - forcing
    }

    pub fn h_norm(&self, u: &GraphFunction) -> Result<f64, VariationalError> {
        self.dirichlet(u)?;
        let sq = self.h_norm_sq_raw(&u.0);
        if sq < 0.0 {
            return Err(CalculusError::NegativeRadicand(sq).into());
        }
        Ok(math::sqrt(sq))
    }

    pub fn energy_report(&self, u: &GraphFunction) -> Result<EnergyReport, VariationalError> {
        self.dirichlet(u)?;
        Ok(EnergyReport {
            phi: self.phi_raw(&u.0),
            grad_norm: math::norm2(&self.gradient_raw(&u.0)),
            h_norm_u: math::sqrt(self.h_norm_sq_raw(&u.0).max(0.0)),
            pointwise_residual_max: math::max_abs(&self.residual_raw(&u.0)),
        })
    }

    /// ∫_Ω h dμ.
    pub fn h_integral(&self) -> f64 {
        self.partition
            .omega()
            .iter()
            .map(|&x| self.graph.measure(x) * self.h[x])
            .sum()
    }

    pub fn kappa(&self, choice: KappaChoice) -> Result<f64, VariationalError> {
        let mh = self.graph.mu_min() * self.h0;
        match choice {
            KappaChoice::LowerBound => Ok(math::sqrt(mh)),
            KappaChoice::Proof => Ok(math::sqrt(1.0 / mh)),
            KappaChoice::IntegralBound => {
                let product = mh * self.h_integral();
                if product >= 1.0 {
                    return Err(VariationalError::DegenerateKappa { product });
                }
                Ok(math::sqrt(mh) / math::sqrt(1.0 - product))
            }
        }
    }

    /// κ and the largest admissible β for the ball of squared radius `rho`:
    /// β_max = ρ / (2 max_{|u| ≤ κ√ρ} |F(x,u)|) − 1, with the maximum taken
    /// on `points` uniform samples.
    pub fn ball_constants(
        &self,
        rho: f64,
        choice: KappaChoice,
        points: usize,
    ) -> Result<BallConstants, VariationalError> {
        if !(rho > 0.0) {
            return Err(VariationalError::NonpositiveRho(rho));
        }
        let kappa = self.kappa(choice)?;
        let radius = kappa * math::sqrt(rho);
        let (max_abs_primitive, argmax) = nonlinearity::max_abs_primitive(&self.nl, radius, points);
        let beta_max = if max_abs_primitive == 0.0 {
            f64::INFINITY
        } else {
            rho / (2.0 * max_abs_primitive) - 1.0
        };
        Ok(BallConstants {
            rho,
            kappa,
            kappa_choice: choice,
            radius,
            max_abs_primitive,
            argmax,
            beta_max,
        })
    }
}

/// Selects which κ expression sizes the ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum KappaChoice {
    /// (μ_min h0)^{1/2}, for h ≥ h0.
    LowerBound,
    /// (μ_min h0)^{1/2} / (1 − μ_min h0 ∫_Ω h dμ)^{1/2}.
    IntegralBound,
    /// (1/(μ_min h0))^{1/2}, the sup-embedding constant.
    Proof,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BallConstants {
    pub rho: f64,
    pub kappa: f64,
    pub kappa_choice: KappaChoice,
    /// κ√ρ, the sup-norm radius over which |F| is maximized.
    pub radius: f64,
    pub max_abs_primitive: f64,
    pub argmax: f64,
    /// +∞ when F vanishes on the whole range.
    pub beta_max: f64,
}

impl BallConstants {
    /// Whether some β > 0 satisfies 1 < β + 1 ≤ ρ / (2 max |F|).
    pub fn has_valid_beta(&self) -> bool {
        self.beta_max > 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnergyReport {
    pub phi: f64,
    pub grad_norm: f64,
    pub h_norm_u: f64,
    pub pointwise_residual_max: f64,
}

//! Discrete variational calculus on finite weighted graphs.
//!
//! This crate evaluates the μ-Laplacian, the gradient form Γ and the Sobolev
//! type norms on a graph domain Ω with Dirichlet data on its vertex boundary
//! ∂Ω, and uses them to study
//!
//! ```text
//! -Δu + h u = f(x, u)   in Ω,
//!         u = 0         on ∂Ω,
//! ```
//!
//! through the energy functional
//!
//! ```text
//! Φ(u) = ½ (∫_{Ω∪∂Ω} |∇u|² dμ + ∫_Ω h u² dμ) - ∫_Ω F(x, u) dμ.
//! ```
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`graph`] | weighted graphs, measures, boundary partitions |
//! | [`calculus`] | Δ, Γ, \|∇u\|, integrals, norms, Green's identity |
//! | [`spectral`] | first Dirichlet eigenvalue and embedding constants |
//! | [`nonlinearity`] | nonlinearity families and hypothesis checkers |
//! | [`variational`] | Φ, its gradient, residuals and ball constants |
//! | [`solver`] | mountain-pass and ball-constrained solvers |
//!
//! The crate is `no_std` and only needs `alloc`. File formats, reports and
//! the command line live in the `graphpde` crate.

#![no_std]
#![warn(missing_debug_implementations)]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod calculus;
pub mod graph;
mod linalg;
mod math;
pub mod nonlinearity;
pub mod solver;
pub mod spectral;
pub mod variational;

pub use calculus::{CalculusError, InnerKind, NormKind};
pub use graph::{
    DomainPartition, EdgeSpec, GraphError, GraphFunction, MeasureMode, Role, VertexSpec,
    WeightedGraph,
};
pub use nonlinearity::{
    CheckExtras, Family, GridSpec, Hypothesis, HypothesisVerdict, Nonlinearity, NonlinearityError,
    SampledRange,
};
pub use solver::{
    BallOutcome, BallReport, HypothesisSet, MountainPassOutcome, PathSnapshot, Solution,
    SolutionKind, SolveReport, SolverConfig, SolverError, SpikeEndpoint, StepRule, TraceEntry,
    TwoSolutionMode,
};
pub use spectral::{ConstantsReport, EigenResult, KappaBranch, SpectralError};
pub use variational::{BallConstants, KappaChoice, Problem, VariationalError};

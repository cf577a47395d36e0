//! Critical points of Φ: a mountain-pass path deformation with Newton
//! polish, a ball-constrained minimizer, and the two-solution pipeline.
//!
//! The mountain-pass search keeps a piecewise-linear path from 0 to an
//! endpoint `e` with Φ(e) ≤ 0. Each iteration locates the maximum of Φ along
//! the whole path (not only at its nodes), inserts that point as a node,
//! and moves it one descent step. Inserting a node does not change the path,
//! and a step is only accepted when the path maximum does not increase, so
//! the traced maximum is nonincreasing. Once the gradient at the highest
//! point is small, Newton's method on −Δu + hu − f(u) = 0 finishes the job.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus;
use crate::graph::GraphFunction;
use crate::linalg;
use crate::math;
use crate::nonlinearity::{
    self, check_f, check_h, CheckExtras, GridSpec, HCheck, Hypothesis, HypothesisVerdict,
    NonlinearityError,
};
use crate::spectral::{self, ConstantsReport, SpectralError};
use crate::variational::{BallConstants, KappaChoice, Problem, VariationalError};

/// Minimum sup-norm distance between two reported solutions.
pub const DISTINCT_TOL: f64 = 1e-6;
/// Below this sup norm a critical point counts as the zero function.
pub const TRIVIAL_TOL: f64 = 1e-10;
/// A ball minimizer closer than this to the sphere counts as on the sphere.
pub const SPHERE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "rule", rename_all = "snake_case"))]
pub enum StepRule {
    /// Steps start at `alpha` and are halved only to keep the path maximum
    /// from increasing.
    Fixed { alpha: f64 },
    /// Armijo backtracking: shrink by `shrink` until
    /// Φ(u − αg) ≤ Φ(u) − `armijo`·α‖g‖².
    Backtracking { shrink: f64, armijo: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub path_points: usize,
    pub deform_steps: usize,
    pub deform_tol: f64,
    pub newton_tol: f64,
    pub newton_max: usize,
    pub step_rule: StepRule,
    /// Squared H-norm radius of the ball for the constrained minimizer.
    pub rho: Option<f64>,
    pub seed: u64,
    /// Skip the hypothesis gates (verdicts are still reported).
    pub waive_hypotheses: bool,
    /// Capture (s, Φ(γ(s))) snapshots of the deformed path.
    pub record_path_profile: bool,
    pub profile_every: usize,
    /// Random test functions used for the weak-residual check.
    pub weak_tests: usize,
    /// Sampling density for hypothesis checks and max |F|.
    pub grid_points: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            path_points: 41,
            deform_steps: 5000,
            deform_tol: 1e-8,
            newton_tol: 1e-12,
            newton_max: 50,
            step_rule: StepRule::Backtracking {
                shrink: 0.5,
                armijo: 1e-4,
            },
            rho: None,
            seed: 0,
            waive_hypotheses: false,
            record_path_profile: false,
            profile_every: 50,
            weak_tests: 50,
            grid_points: GridSpec::DEFAULT_POINTS,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if self.path_points < 3 {
            return Err(SolverError::InvalidConfig("path_points must be at least 3"));
        }
        if !(self.deform_tol > 0.0) || !(self.newton_tol > 0.0) {
            return Err(SolverError::InvalidConfig("tolerances must be positive"));
        }
        if self.newton_max == 0 {
            return Err(SolverError::InvalidConfig("newton_max must be positive"));
        }
        match self.step_rule {
            StepRule::Fixed { alpha } if !(alpha > 0.0) => {
                return Err(SolverError::InvalidConfig("fixed step must be positive"))
            }
            StepRule::Backtracking { shrink, armijo }
                if !(shrink > 0.0 && shrink < 1.0) || !(armijo > 0.0 && armijo < 1.0) =>
            {
                return Err(SolverError::InvalidConfig(
                    "backtracking factors must lie in (0, 1)",
                ))
            }
            _ => {}
        }
        if let Some(rho) = self.rho {
            if !(rho > 0.0) {
                return Err(SolverError::InvalidConfig("rho must be positive"));
            }
        }
        if self.grid_points < 2 {
            return Err(SolverError::InvalidConfig("grid_points must be at least 2"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SolutionKind {
    MountainPass,
    BallMin,
    Trivial,
}

impl SolutionKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::MountainPass => "mountain_pass",
            Self::BallMin => "ball_min",
            Self::Trivial => "trivial",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Solution {
    pub u: GraphFunction,
    pub phi_value: f64,
    /// Euclidean norm of the vertex gradient μ(x)r(x).
    pub grad_norm: f64,
    pub residual_max: f64,
    pub h_norm: f64,
    pub kind: SolutionKind,
    /// Whether ‖u‖_H < √ρ, when a ball was in play.
    pub in_ball: Option<bool>,
    pub rho: Option<f64>,
    pub converged: bool,
    pub newton_iterations: usize,
    /// A 1e−10 identity shift was needed to factor the Newton matrix.
    pub tikhonov_shift: bool,
    /// max |⟨Φ'(u), φ⟩| / ‖φ‖_{L¹} over seeded random test functions.
    pub weak_residual_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceEntry {
    pub solver: SolutionKind,
    pub iteration: usize,
    /// Path maximum (mountain pass) or current value (ball descent).
    pub phi: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PathSnapshot {
    pub iteration: usize,
    /// (normalized arc length, Φ) at every path node.
    pub points: Vec<(f64, f64)>,
}

/// Endpoint `e = t·1_{x0}` with Φ(e) ≤ 0.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpikeEndpoint {
    pub e: GraphFunction,
    pub vertex: usize,
    pub t: f64,
    pub phi: f64,
    /// ‖t'·1_{x0}‖_H for the largest sampled t' with Φ > 0.
    pub empirical_radius: f64,
    /// (t, Φ(t·1_{x0})) pairs visited.
    pub samples: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MountainPassOutcome {
    pub solution: Solution,
    pub endpoint: SpikeEndpoint,
    pub trace: Vec<TraceEntry>,
    pub snapshots: Vec<PathSnapshot>,
    pub deform_iterations: usize,
    /// Newton took over before the deformation reached `deform_tol`.
    pub newton_handoff: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallOutcome {
    pub solution: Solution,
    pub trace: Vec<TraceEntry>,
}

/// How the ball of the two-solution pipeline is sized.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "mode", rename_all = "snake_case"))]
pub enum TwoSolutionMode {
    /// Ball ‖u‖_H < √ρ with β from the small-ball bound on |F|.
    Radius { rho: f64, beta: Option<f64> },
    /// Ball of squared radius M0²/(μ_min h0), gated by the bound on
    /// max_{|u| ≤ M0} |F|.
    Level { m0: f64, beta: Option<f64> },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BallReport {
    pub mode: TwoSolutionMode,
    pub rho: f64,
    pub beta: f64,
    /// Upper end of the admissible range 1 < β + 1 ≤ `beta_bound` + 1.
    pub beta_bound: f64,
    pub constants: BallConstants,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolveReport {
    pub solutions: Vec<Solution>,
    pub hypothesis_verdicts: Vec<HypothesisVerdict>,
    pub lambda1: f64,
    pub constants: ConstantsReport,
    pub ball: Option<BallReport>,
    pub iteration_trace: Vec<TraceEntry>,
    /// Gradient norms decreased along the deformation while Φ stayed finite.
    pub ps_diagnostic: bool,
    pub endpoint: Option<SpikeEndpoint>,
    pub snapshots: Vec<PathSnapshot>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolverError {
    InvalidConfig(&'static str),
    MissingRho,
    Precondition {
        hypothesis: Hypothesis,
        detail: String,
    },
    /// Doubling t never made Φ(t·1_{x0}) nonpositive.
    NotSuperquadratic {
        samples: Vec<(f64, f64)>,
    },
    /// Φ(t·1_{x0}) ≤ 0 for every sampled t, so no positive level separates 0 from e.
    NoPositiveRadius {
        samples: Vec<(f64, f64)>,
    },
    /// The path maximum sits at a fixed endpoint.
    NoMountainPassGeometry {
        phi_start: f64,
        phi_end: f64,
    },
    Stalled {
        iterations: usize,
        max_phi: f64,
        grad_norm: f64,
    },
    DeformationBudget {
        iterations: usize,
        grad_norm: f64,
    },
    NewtonDiverged {
        iterations: usize,
        residual: f64,
    },
    NewtonNoConvergence {
        iterations: usize,
        residual: f64,
    },
    CollapsedToTrivial,
    NoInteriorMinimizer {
        h_norm: f64,
        rho: f64,
    },
    NoValidBeta {
        beta: f64,
        beta_max: f64,
    },
    Coincident {
        distance: f64,
    },
    Variational(VariationalError),
    Spectral(SpectralError),
    Nonlinearity(NonlinearityError),
}

impl fmt::Display for SolverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidConfig(m) => write!(f, "invalid solver configuration: {m}"),
            Self::MissingRho => write!(f, "ball radius rho is required"),
            Self::Precondition { hypothesis, detail } => write!(
                f,
                "precondition failed: {hypothesis} ({}) does not hold: {detail}",
                hypothesis.statement()
            ),
            Self::NotSuperquadratic { samples } => write!(
                f,
                "Phi(t * spike) stayed positive up to t = 2^60 ({} samples); f is not superquadratic",
                samples.len()
            ),
            Self::NoPositiveRadius { .. } => {
                write!(f, "Phi(t * spike) is nonpositive for all sampled t; no mountain-pass level")
            }
            Self::NoMountainPassGeometry { phi_start, phi_end } => write!(
                f,
                "path maximum at a fixed endpoint (Phi(start) = {phi_start}, Phi(end) = {phi_end})"
            ),
            Self::Stalled { iterations, max_phi, grad_norm } => write!(
                f,
                "deformation stalled after {iterations} iterations at max Phi = {max_phi}, |grad| = {grad_norm:e}"
            ),
            Self::DeformationBudget { iterations, grad_norm } => write!(
                f,
                "deformation budget of {iterations} steps exhausted with |grad| = {grad_norm:e}"
            ),
            Self::NewtonDiverged { iterations, residual } => {
                write!(f, "Newton diverged after {iterations} iterations (residual {residual:e})")
            }
            Self::NewtonNoConvergence { iterations, residual } => write!(
                f,
                "Newton did not reach tolerance in {iterations} iterations (residual {residual:e})"
            ),
            Self::CollapsedToTrivial => write!(f, "iteration collapsed onto the trivial solution u = 0"),
            Self::NoInteriorMinimizer { h_norm, rho } => write!(
                f,
                "no interior minimizer found: minimizer sits on the sphere |u|_H = {h_norm} (rho = {rho})"
            ),
            Self::NoValidBeta { beta, beta_max } => {
                write!(f, "beta = {beta} outside the admissible range (0, {beta_max}]")
            }
            Self::Coincident { distance } => {
                write!(f, "the two solutions coincide (sup distance {distance:e})")
            }
            Self::Variational(e) => e.fmt(f),
            Self::Spectral(e) => e.fmt(f),
            Self::Nonlinearity(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for SolverError {}

impl From<VariationalError> for SolverError {
    fn from(e: VariationalError) -> Self {
        Self::Variational(e)
    }
}

impl From<SpectralError> for SolverError {
    fn from(e: SpectralError) -> Self {
        Self::Spectral(e)
    }
}

impl From<NonlinearityError> for SolverError {
    fn from(e: NonlinearityError) -> Self {
        Self::Nonlinearity(e)
    }
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn lerp(a: &[f64], d: &[f64], s: f64) -> Vec<f64> {
    a.iter().zip(d).map(|(x, y)| x + s * y).collect()
}

/// Works on interior unknowns; every evaluation scatters into a full vector.
struct Interior<'a> {
    pr: &'a Problem,
    full: core::cell::RefCell<Vec<f64>>,
}

impl<'a> Interior<'a> {
    fn new(pr: &'a Problem) -> Self {
        Self {
            pr,
            full: core::cell::RefCell::new(vec![0.0; pr.graph.len()]),
        }
    }

    fn with_full<R>(&self, v: &[f64], op: impl FnOnce(&[f64]) -> R) -> R {
        let mut full = self.full.borrow_mut();
        for (&x, &val) in self.pr.partition.omega().iter().zip(v) {
            full[x] = val;
        }
        op(&full)
    }

    fn phi(&self, v: &[f64]) -> f64 {
        self.with_full(v, |u| self.pr.phi_raw(u))
    }

    fn grad(&self, v: &[f64]) -> Vec<f64> {
        self.with_full(v, |u| self.pr.gradient_raw(u))
    }

    fn residual(&self, v: &[f64]) -> Vec<f64> {
        self.with_full(v, |u| self.pr.residual_raw(u))
    }

    fn jacobian(&self, v: &[f64]) -> linalg::Dense {
        self.with_full(v, |u| self.pr.jacobian_raw(u))
    }

    fn h_norm(&self, v: &[f64]) -> f64 {
        self.with_full(v, |u| math::sqrt(self.pr.h_norm_sq_raw(u).max(0.0)))
    }

    /// 1 / max_x (Σ_y μ_xy + μ(x)|h(x)|): a step matched to the quadratic part.
    fn base_step(&self) -> f64 {
        let g = &self.pr.graph;
        let scale = self
            .pr
            .partition
            .omega()
            .iter()
            .map(|&x| {
                let w: f64 = g.neighbors(x).iter().map(|&(_, w)| w).sum();
                w + g.measure(x) * math::abs(self.pr.h[x])
            })
            .fold(0.0, f64::max);
        1.0 / scale
    }
}

/// Checks hypotheses and builds the endpoint `e = t·1_{x0}` at the interior
/// vertex of largest measure (lowest index on ties), doubling t from 1 until
/// Φ(e) ≤ 0.
pub fn build_spike_endpoint(
    pr: &Problem,
    config: &SolverConfig,
) -> Result<SpikeEndpoint, SolverError> {
    config.validate()?;
    if !config.waive_hypotheses {
        superquadratic_gate(pr, config)?;
    }
    spike_endpoint(pr)
}

fn superquadratic_gate(pr: &Problem, config: &SolverConfig) -> Result<(), SolverError> {
    let (theta, m) = pr.nl.ar_constants().unwrap_or((f64::NAN, f64::NAN));
    let grid = GridSpec::new(
        GridSpec::default_for(Some(m).filter(|m| m.is_finite()), None).half_width,
        config.grid_points,
    );
    if theta.is_finite() {
        let extras = CheckExtras {
            theta: Some(theta),
            m: Some(m),
            ..Default::default()
        };
        if let Ok(v) = check_f(&pr.nl, Hypothesis::F4, &grid, &extras) {
            if v.holds {
                return Ok(());
            }
        }
    }
    let f6 = check_f(&pr.nl, Hypothesis::F6, &grid, &CheckExtras::default())?;
    if f6.holds {
        return Ok(());
    }
    Err(SolverError::Precondition {
        hypothesis: Hypothesis::F4,
        detail: f6.witness,
    })
}

fn spike_endpoint(pr: &Problem) -> Result<SpikeEndpoint, SolverError> {
    let g = &pr.graph;
    let omega = pr.partition.omega();
    let mut x0 = omega[0];
    for &x in omega {
        if g.measure(x) > g.measure(x0) {
            x0 = x;
        }
    }
    let n = g.len();
    let phi_at = |t: f64| pr.phi_raw(&GraphFunction::spike(n, x0, t).0);
    let mut samples = Vec::new();

    let mut t = 1.0;
    let mut value = phi_at(t);
    samples.push((t, value));
    while !(value > 0.0) {
        t *= 0.5;
        if t < math::powi(0.5, 60) {
            return Err(SolverError::NoPositiveRadius { samples });
        }
        value = phi_at(t);
        samples.push((t, value));
    }
    let mut last_positive = t;
    loop {
        t *= 2.0;
        if t > math::powi(2.0, 60) {
            return Err(SolverError::NotSuperquadratic { samples });
        }
        value = phi_at(t);
        samples.push((t, value));
        if value <= 0.0 {
            break;
        }
        last_positive = t;
    }
    let radius = math::sqrt(
        pr.h_norm_sq_raw(&GraphFunction::spike(n, x0, last_positive).0)
            .max(0.0),
    );
    Ok(SpikeEndpoint {
        e: GraphFunction::spike(n, x0, t),
        vertex: x0,
        t,
        phi: value,
        empirical_radius: radius,
        samples,
    })
}

/// Maximum of Φ on the segment a + s(b − a), s ∈ [0, 1].
fn segment_max(ops: &Interior<'_>, a: &[f64], b: &[f64], fa: f64, fb: f64) -> (f64, f64) {
    const SAMPLES: usize = 8;
    let d = sub(b, a);
    let mut best = (0.0, fa);
    let mut values = [0.0; SAMPLES + 1];
    values[0] = fa;
    values[SAMPLES] = fb;
    for j in 1..SAMPLES {
        values[j] = ops.phi(&lerp(a, &d, j as f64 / SAMPLES as f64));
    }
    for (j, &v) in values.iter().enumerate() {
        if v > best.1 {
            best = (j as f64 / SAMPLES as f64, v);
        }
    }
    let j = (best.0 * SAMPLES as f64) as usize;
    let slope = |s: f64| dot(&ops.grad(&lerp(a, &d, s)), &d);
    let lo = j.saturating_sub(1) as f64 / SAMPLES as f64;
    let hi = (j + 1).min(SAMPLES) as f64 / SAMPLES as f64;
    let (mut lo, mut hi) = (lo, hi);
    if !(slope(lo) > 0.0 && slope(hi) < 0.0) {
        // narrow bracket around an endpoint maximum
        if j == 0 && slope(0.0) > 0.0 {
            lo = 0.0;
            hi = 1.0 / SAMPLES as f64;
            if !(slope(hi) < 0.0) {
                return best;
            }
        } else if j == SAMPLES && slope(1.0) < 0.0 {
            lo = 1.0 - 1.0 / SAMPLES as f64;
            hi = 1.0;
            if !(slope(lo) > 0.0) {
                return best;
            }
        } else {
            return best;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = slope(mid);
        if s > 0.0 {
            lo = mid;
        } else if s < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            hi = mid;
            break;
        }
    }
    let s = 0.5 * (lo + hi);
    let v = ops.phi(&lerp(a, &d, s));
    if v > best.1 {
        (s, v)
    } else {
        best
    }
}

struct Path {
    nodes: Vec<Vec<f64>>,
    values: Vec<f64>,
    /// (s, max Φ) on segment i = [node i, node i+1].
    seg: Vec<(f64, f64)>,
}

impl Path {
    fn new(ops: &Interior<'_>, start: &[f64], end: &[f64], points: usize) -> Self {
        let d = sub(end, start);
        let nodes: Vec<Vec<f64>> = (0..points)
            .map(|k| {
                if k == points - 1 {
                    end.to_vec()
                } else {
                    lerp(start, &d, k as f64 / (points - 1) as f64)
                }
            })
            .collect();
        let values: Vec<f64> = nodes.iter().map(|v| ops.phi(v)).collect();
        let seg = (0..points - 1)
            .map(|i| segment_max(ops, &nodes[i], &nodes[i + 1], values[i], values[i + 1]))
            .collect();
        Self { nodes, values, seg }
    }

    fn max(&self) -> (usize, f64, f64) {
        let mut best = (0, self.seg[0].0, self.seg[0].1);
        for (i, &(s, v)) in self.seg.iter().enumerate() {
            if v > best.2 {
                best = (i, s, v);
            }
        }
        best
    }

    fn snapshot(&self, iteration: usize) -> PathSnapshot {
        let mut acc = 0.0;
        let mut arc = vec![0.0];
        for w in self.nodes.windows(2) {
            acc += math::norm2(&sub(&w[1], &w[0]));
            arc.push(acc);
        }
        let total = if acc > 0.0 { acc } else { 1.0 };
        PathSnapshot {
            iteration,
            points: arc
                .iter()
                .zip(&self.values)
                .map(|(s, v)| (s / total, *v))
                .collect(),
        }
    }
}

/// Mountain-pass critical point from the path γ(s) = s·e, with the
/// single-solution hypothesis gate unless waived.
pub fn mountain_pass(
    pr: &Problem,
    config: &SolverConfig,
) -> Result<MountainPassOutcome, SolverError> {
    config.validate()?;
    if !config.waive_hypotheses {
        let (verdicts, ok) = single_solution_verdicts(pr, config)?;
        if !ok {
            let failed = verdicts.iter().find(|v| !v.holds).cloned();
            let (hypothesis, detail) =
                failed.map_or((Hypothesis::F4, String::new()), |v| (v.name, v.witness));
            return Err(SolverError::Precondition { hypothesis, detail });
        }
    }
    let endpoint = spike_endpoint(pr)?;
    let m = pr.interior_len();
    mountain_pass_from(pr, config, &vec![0.0; m], endpoint)
}

fn mountain_pass_from(
    pr: &Problem,
    config: &SolverConfig,
    start: &[f64],
    endpoint: SpikeEndpoint,
) -> Result<MountainPassOutcome, SolverError> {
    let ops = Interior::new(pr);
    let end = pr.partition.restrict(&endpoint.e);
    let mut path = Path::new(&ops, start, &end, config.path_points);
    let alpha0 = ops.base_step();
    let mut alpha = match config.step_rule {
        StepRule::Fixed { alpha } => alpha,
        StepRule::Backtracking { .. } => alpha0,
    };
    let mut trace = Vec::new();
    let mut snapshots = Vec::new();
    let mut history: Vec<f64> = Vec::new();
    let mut converged_at: Option<usize> = None;
    let mut handoff_from: Option<usize> = None;

    if config.record_path_profile {
        snapshots.push(path.snapshot(0));
    }

    let last = |p: &Path| p.nodes.len() - 1;
    let mut iteration = 0;
    let mut current = 0usize;
    while iteration < config.deform_steps {
        let (i, s, top) = path.max();
        // locate or insert the highest point as node k
        let k = if s <= 1e-12 {
            i
        } else if s >= 1.0 - 1e-12 {
            i + 1
        } else {
            let d = sub(&path.nodes[i + 1], &path.nodes[i]);
            let p = lerp(&path.nodes[i], &d, s);
            path.nodes.insert(i + 1, p);
            path.values.insert(i + 1, top);
            path.seg[i] = (1.0, top);
            path.seg.insert(i + 1, (0.0, top));
            i + 1
        };
        if k == 0 || k == last(&path) {
            return Err(SolverError::NoMountainPassGeometry {
                phi_start: path.values[0],
                phi_end: path.values[last(&path)],
            });
        }
        current = k;
        let g = ops.grad(&path.nodes[k]);
        let gn = math::norm2(&g);
        trace.push(TraceEntry {
            solver: SolutionKind::MountainPass,
            iteration,
            phi: top,
            grad_norm: gn,
        });
        history.push(top);
        if gn <= config.deform_tol {
            converged_at = Some(iteration);
            break;
        }
        if history.len() > 100 && history[history.len() - 101] - top < 1e-15 {
            handoff_from = Some(iteration);
            break;
        }

        // descent step on node k, keeping the path maximum from rising
        let p = path.nodes[k].clone();
        let fp = path.values[k];
        let slack = 1e-15 * top.abs().max(1.0);
        let mut step = match config.step_rule {
            StepRule::Fixed { alpha } => alpha,
            StepRule::Backtracking { .. } => (2.0 * alpha).min(64.0 * alpha0),
        };
        let mut accepted = false;
        for _ in 0..60 {
            let q = lerp(&p, &g, -step);
            let fq = ops.phi(&q);
            let armijo_ok = match config.step_rule {
                StepRule::Fixed { .. } => fq < fp,
                StepRule::Backtracking { armijo, .. } => fq <= fp - armijo * step * gn * gn,
            };
            if armijo_ok {
                let left = segment_max(&ops, &path.nodes[k - 1], &q, path.values[k - 1], fq);
                let right = segment_max(&ops, &q, &path.nodes[k + 1], fq, path.values[k + 1]);
                if left.1 <= top + slack && right.1 <= top + slack {
                    path.nodes[k] = q;
                    path.values[k] = fq;
                    path.seg[k - 1] = left;
                    path.seg[k] = right;
                    accepted = true;
                    break;
                }
            }
            step *= match config.step_rule {
                StepRule::Backtracking { shrink, .. } => shrink,
                StepRule::Fixed { .. } => 0.5,
            };
        }
        if accepted {
            if let StepRule::Backtracking { .. } = config.step_rule {
                alpha = step;
            }
        }
        iteration += 1;
        if config.record_path_profile
            && config.profile_every > 0
            && iteration % config.profile_every == 0
        {
            snapshots.push(path.snapshot(iteration));
        }
    }
    if config.record_path_profile {
        snapshots.push(path.snapshot(iteration));
    }

    let start_point = path.nodes[current].clone();
    let gn = trace.last().map_or(f64::NAN, |t| t.grad_norm);
    let newton_handoff = converged_at.is_none();
    let polished = polish(pr, &ops, start_point, config);
    let (u, newton_iterations, shifted) = match (polished, converged_at, handoff_from) {
        (Ok(r), _, _) => r,
        (Err(e), Some(_), _) => return Err(e),
        (Err(_), None, Some(it)) => {
            return Err(SolverError::Stalled {
                iterations: it,
                max_phi: history[history.len() - 1],
                grad_norm: gn,
            })
        }
        (Err(_), None, None) => {
            return Err(SolverError::DeformationBudget {
                iterations: iteration,
                grad_norm: gn,
            })
        }
    };
    if math::max_abs(&u) < TRIVIAL_TOL && pr.nl.vanishes_at_zero() {
        return Err(SolverError::CollapsedToTrivial);
    }
    let solution = finish(
        pr,
        &ops,
        &u,
        SolutionKind::MountainPass,
        config,
        newton_iterations,
        shifted,
        None,
    );
    Ok(MountainPassOutcome {
        solution,
        endpoint,
        trace,
        snapshots,
        deform_iterations: iteration,
        newton_handoff,
    })
}

/// Newton on the vertex gradient, stopping at max |r| ≤ newton_tol.
fn polish(
    pr: &Problem,
    ops: &Interior<'_>,
    mut u: Vec<f64>,
    config: &SolverConfig,
) -> Result<(Vec<f64>, usize, bool), SolverError> {
    let _ = pr;
    let mut prev = f64::INFINITY;
    let mut rising = 0;
    let mut shifted = false;
    for it in 0..=config.newton_max {
        let r = ops.residual(&u);
        let rmax = math::max_abs(&r);
        if !rmax.is_finite() {
            return Err(SolverError::NewtonDiverged {
                iterations: it,
                residual: rmax,
            });
        }
        if rmax <= config.newton_tol {
            return Ok((u, it, shifted));
        }
        if it == config.newton_max {
            return Err(SolverError::NewtonNoConvergence {
                iterations: it,
                residual: rmax,
            });
        }
        if rmax > prev {
            rising += 1;
            if rising >= 5 {
                return Err(SolverError::NewtonDiverged {
                    iterations: it,
                    residual: rmax,
                });
            }
        } else {
            rising = 0;
        }
        prev = rmax;
        let j = ops.jacobian(&u);
        let rhs: Vec<f64> = ops.grad(&u).iter().map(|v| -v).collect();
        let floor = 1e-14 * j.max_abs().max(f64::MIN_POSITIVE);
        let delta = match linalg::lu_solve(j.clone(), rhs.clone(), floor) {
            Some(d) => d,
            None => {
                shifted = true;
                let mut js = j;
                for i in 0..js.n {
                    js.add(i, i, 1e-10);
                }
                linalg::lu_solve(js, rhs, 0.0).ok_or(SolverError::NewtonDiverged {
                    iterations: it,
                    residual: rmax,
                })?
            }
        };
        for (v, d) in u.iter_mut().zip(&delta) {
            *v += d;
        }
    }
    unreachable!("loop returns on its last iteration")
}

#[allow(clippy::too_many_arguments)]
fn finish(
    pr: &Problem,
    ops: &Interior<'_>,
    u: &[f64],
    kind: SolutionKind,
    config: &SolverConfig,
    newton_iterations: usize,
    tikhonov_shift: bool,
    rho: Option<f64>,
) -> Solution {
    let full = pr.partition.extend_by_zero(u);
    let residual_max = math::max_abs(&ops.residual(u));
    let h_norm = ops.h_norm(u);
    Solution {
        phi_value: ops.phi(u),
        grad_norm: math::norm2(&ops.grad(u)),
        residual_max,
        h_norm,
        kind,
        in_ball: rho.map(|r| h_norm < math::sqrt(r)),
        rho,
        converged: residual_max <= config.newton_tol,
        newton_iterations,
        tikhonov_shift,
        weak_residual_max: weak_residual(pr, &full, config.seed, config.weak_tests),
        u: full,
    }
}

/// max over seeded random φ supported in Ω of |⟨Φ'(u), φ⟩| / ‖φ‖_{L¹}.
pub fn weak_residual(pr: &Problem, u: &GraphFunction, seed: u64, tests: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = pr.interior_len();
    let mut worst: f64 = 0.0;
    for _ in 0..tests {
        let vals: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let phi = pr.partition.extend_by_zero(&vals);
        let l1 = calculus::l1_norm(&pr.graph, &pr.partition, &phi.0);
        if l1 > 0.0 {
            worst = worst.max(math::abs(pr.directional_raw(&u.0, &phi.0)) / l1);
        }
    }
    worst
}

/// Projected gradient descent from u ≡ 0 on the ball ‖u‖_H ≤ √ρ, then an
/// unconstrained Newton polish when the minimizer is interior.
pub fn ball_minimize(pr: &Problem, config: &SolverConfig) -> Result<BallOutcome, SolverError> {
    config.validate()?;
    let rho = config.rho.ok_or(SolverError::MissingRho)?;
    if !config.waive_hypotheses {
        let grid = GridSpec::new(10.0, 3);
        let f7 = check_f(&pr.nl, Hypothesis::F7, &grid, &CheckExtras::default())?;
        if !f7.holds && !pr.nl.vanishes_at_zero() {
            return Err(SolverError::Precondition {
                hypothesis: Hypothesis::F7,
                detail: f7.witness,
            });
        }
    }
    let ops = Interior::new(pr);
    let radius = math::sqrt(rho);
    let alpha0 = ops.base_step();
    let project = |v: Vec<f64>| {
        let n = ops.h_norm(&v);
        if n > radius {
            v.iter().map(|x| x * radius / n).collect()
        } else {
            v
        }
    };

    let mut u = vec![0.0; pr.interior_len()];
    let mut fu = ops.phi(&u);
    let mut alpha = match config.step_rule {
        StepRule::Fixed { alpha } => alpha,
        StepRule::Backtracking { .. } => alpha0,
    };
    let mut trace = Vec::new();
    let mut stationary = false;
    for iteration in 0..config.deform_steps {
        let g = ops.grad(&u);
        // projected-gradient stationarity measure at the reference step
        let probe = project(lerp(&u, &g, -alpha0));
        let pg = math::norm2(&sub(&u, &probe)) / alpha0;
        trace.push(TraceEntry {
            solver: SolutionKind::BallMin,
            iteration,
            phi: fu,
            grad_norm: pg,
        });
        if pg <= config.deform_tol {
            stationary = true;
            break;
        }
        let mut step = match config.step_rule {
            StepRule::Fixed { alpha } => alpha,
            StepRule::Backtracking { .. } => (2.0 * alpha).min(64.0 * alpha0),
        };
        let mut moved = false;
        for _ in 0..60 {
            let q = project(lerp(&u, &g, -step));
            let fq = ops.phi(&q);
            let dist = sub(&q, &u);
            let ok = match config.step_rule {
                StepRule::Fixed { .. } => fq <= fu,
                StepRule::Backtracking { armijo, .. } => {
                    fq <= fu - armijo / step * dot(&dist, &dist)
                }
            };
            if ok {
                u = q;
                fu = fq;
                moved = true;
                break;
            }
            step *= match config.step_rule {
                StepRule::Backtracking { shrink, .. } => shrink,
                StepRule::Fixed { .. } => 0.5,
            };
        }
        if moved {
            if let StepRule::Backtracking { .. } = config.step_rule {
                alpha = step;
            }
        } else {
            break;
        }
    }

    let h_norm = ops.h_norm(&u);
    if h_norm >= radius - SPHERE_TOL {
        return Err(SolverError::NoInteriorMinimizer { h_norm, rho });
    }
    if math::max_abs(&u) < TRIVIAL_TOL && pr.nl.vanishes_at_zero() {
        let zero = vec![0.0; u.len()];
        let solution = finish(
            pr,
            &ops,
            &zero,
            SolutionKind::Trivial,
            config,
            0,
            false,
            Some(rho),
        );
        return Ok(BallOutcome { solution, trace });
    }
    let (polished, its, shifted) = match polish(pr, &ops, u, config) {
        Ok(r) => r,
        Err(e) if stationary => return Err(e),
        Err(_) => {
            let gn = trace.last().map_or(f64::NAN, |t| t.grad_norm);
            return Err(SolverError::DeformationBudget {
                iterations: trace.len(),
                grad_norm: gn,
            });
        }
    };
    let kind = if math::max_abs(&polished) < TRIVIAL_TOL && pr.nl.vanishes_at_zero() {
        SolutionKind::Trivial
    } else {
        SolutionKind::BallMin
    };
    let solution = finish(pr, &ops, &polished, kind, config, its, shifted, Some(rho));
    Ok(BallOutcome { solution, trace })
}

fn grid_for(pr: &Problem, config: &SolverConfig, m0: Option<f64>) -> GridSpec {
    let m = pr.nl.ar_constants().map(|(_, m)| m);
    GridSpec::new(GridSpec::default_for(m, m0).half_width, config.grid_points)
}

fn h_verdicts(pr: &Problem) -> Vec<HypothesisVerdict> {
    let (g, p, h) = (&pr.graph, &pr.partition, &pr.h);
    vec![
        check_h(g, p, h, HCheck::H1 { h0: pr.h0 }),
        check_h(g, p, h, HCheck::H2),
        check_h(g, p, h, HCheck::H3 { h0: pr.h0 }),
    ]
}

fn f_verdict(
    pr: &Problem,
    which: Hypothesis,
    grid: &GridSpec,
    extras: &CheckExtras,
) -> Result<HypothesisVerdict, SolverError> {
    match check_f(&pr.nl, which, grid, extras) {
        Ok(v) => Ok(v),
        Err(NonlinearityError::MissingConstant { hypothesis, name }) => Ok(HypothesisVerdict {
            name: hypothesis,
            holds: false,
            witness: format!("not checked: constant {name} unavailable"),
            sampled_range: None,
        }),
        Err(e) => Err(e.into()),
    }
}

fn base_extras(pr: &Problem) -> CheckExtras {
    let (c, p) = pr.nl.growth_constants();
    let ar = pr.nl.ar_constants();
    CheckExtras {
        theta: ar.map(|a| a.0),
        m: ar.map(|a| a.1),
        growth_c: Some(c),
        growth_p: Some(p),
        mu_min: Some(pr.graph.mu_min()),
        h0: Some(pr.h0),
        ..Default::default()
    }
}

fn find(verdicts: &[HypothesisVerdict], name: Hypothesis) -> bool {
    verdicts.iter().any(|v| v.name == name && v.holds)
}

/// Verdicts for the single-solution hypothesis sets and whether one of their
/// hypothesis sets holds: H1, H2, F1, F3 with either (F2, F4) or (F5, F6).
pub fn single_solution_verdicts(
    pr: &Problem,
    config: &SolverConfig,
) -> Result<(Vec<HypothesisVerdict>, bool), SolverError> {
    let grid = grid_for(pr, config, None);
    let extras = base_extras(pr);
    let mut verdicts = h_verdicts(pr);
    for which in [
        Hypothesis::F1,
        Hypothesis::F2,
        Hypothesis::F3,
        Hypothesis::F4,
        Hypothesis::F5,
        Hypothesis::F6,
    ] {
        verdicts.push(f_verdict(pr, which, &grid, &extras)?);
    }
    let ok = HypothesisSet::SingleSolutionAr.holds(&verdicts, false)
        || HypothesisSet::SingleSolutionMonotone.holds(&verdicts, false);
    Ok((verdicts, ok))
}

/// Hypothesis sets of the existence results, named by what they deliver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum HypothesisSet {
    /// H1, H2, F1, F2, F3, F4: one nontrivial solution.
    SingleSolutionAr,
    /// H1, H2, F1, F3, F5, F6: one nontrivial solution.
    SingleSolutionMonotone,
    /// (H1 or H3), H2, F1, F3, F4, F7 and an admissible β: two solutions, one in B_ρ.
    TwoSolutionsBall,
    /// H1, H2, F1, F3, F4, F7, F8: two solutions, one in the M0 ball.
    TwoSolutionsLevel,
}

impl HypothesisSet {
    pub const ALL: [HypothesisSet; 4] = [
        Self::SingleSolutionAr,
        Self::SingleSolutionMonotone,
        Self::TwoSolutionsBall,
        Self::TwoSolutionsLevel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::SingleSolutionAr => "single_solution_ar",
            Self::SingleSolutionMonotone => "single_solution_monotone",
            Self::TwoSolutionsBall => "two_solutions_ball",
            Self::TwoSolutionsLevel => "two_solutions_level",
        }
    }

    /// Whether every member holds among `verdicts`. `beta_ok` reports
    /// whether the ball admits some β > 0; it only matters for the ball set.
    pub fn holds(self, verdicts: &[HypothesisVerdict], beta_ok: bool) -> bool {
        use Hypothesis::*;
        let all = |hs: &[Hypothesis]| hs.iter().all(|&h| find(verdicts, h));
        match self {
            Self::SingleSolutionAr => all(&[H1, H2, F1, F2, F3, F4]),
            Self::SingleSolutionMonotone => all(&[H1, H2, F1, F3, F5, F6]),
            Self::TwoSolutionsBall => {
                (find(verdicts, H1) || find(verdicts, H3)) && all(&[H2, F1, F3, F4, F7]) && beta_ok
            }
            Self::TwoSolutionsLevel => all(&[H1, H2, F1, F3, F4, F7, F8]),
        }
    }
}

fn spectral_parts(pr: &Problem) -> Result<(f64, ConstantsReport), SolverError> {
    let eig = spectral::lambda1(&pr.graph, &pr.partition, 1e-12, 10_000)?;
    let constants = spectral::constants(&pr.graph, &pr.partition, &pr.h, pr.h0, eig.lambda1)?;
    Ok((eig.lambda1, constants))
}

fn ps_diagnostic(trace: &[TraceEntry]) -> bool {
    match (trace.first(), trace.last()) {
        (Some(a), Some(b)) => {
            trace.iter().all(|t| t.phi.is_finite())
                && (b.grad_norm < a.grad_norm || b.grad_norm == 0.0)
        }
        _ => false,
    }
}

/// Runs the mountain-pass solver and assembles a report with hypothesis
/// verdicts, λ₁ and the embedding constants.
pub fn solve_single(pr: &Problem, config: &SolverConfig) -> Result<SolveReport, SolverError> {
    config.validate()?;
    let (verdicts, ok) = single_solution_verdicts(pr, config)?;
    if !ok && !config.waive_hypotheses {
        let failed = verdicts.iter().find(|v| !v.holds).cloned();
        let (hypothesis, detail) =
            failed.map_or((Hypothesis::F4, String::new()), |v| (v.name, v.witness));
        return Err(SolverError::Precondition { hypothesis, detail });
    }
    let (lambda1, constants) = spectral_parts(pr)?;
    let endpoint = spike_endpoint(pr)?;
    let outcome = mountain_pass_from(pr, config, &vec![0.0; pr.interior_len()], endpoint)?;
    let mut notes = Vec::new();
    if outcome.newton_handoff {
        notes.push(String::from(
            "deformation handed off to Newton before reaching deform_tol",
        ));
    }
    notes.push(format!(
        "spike endpoint at {} with t = {}, empirical mountain-pass radius {}",
        pr.graph.id(outcome.endpoint.vertex),
        outcome.endpoint.t,
        outcome.endpoint.empirical_radius
    ));
    Ok(SolveReport {
        solutions: vec![outcome.solution],
        hypothesis_verdicts: verdicts,
        lambda1,
        constants,
        ball: None,
        ps_diagnostic: ps_diagnostic(&outcome.trace),
        iteration_trace: outcome.trace,
        endpoint: Some(outcome.endpoint),
        snapshots: outcome.snapshots,
        notes,
    })
}

/// Two nontrivial solutions: a local minimizer inside the ball and a
/// mountain-pass point. Requires f(x,0) ≠ 0 unless waived.
pub fn two_solutions(
    pr: &Problem,
    config: &SolverConfig,
    mode: TwoSolutionMode,
) -> Result<SolveReport, SolverError> {
    config.validate()?;
    let m0 = match mode {
        TwoSolutionMode::Level { m0, .. } => Some(m0),
        TwoSolutionMode::Radius { .. } => None,
    };
    let grid = grid_for(pr, config, m0);
    let mut extras = base_extras(pr);
    let mut verdicts = h_verdicts(pr);
    for which in [
        Hypothesis::F1,
        Hypothesis::F3,
        Hypothesis::F4,
        Hypothesis::F7,
    ] {
        verdicts.push(f_verdict(pr, which, &grid, &extras)?);
    }
    let mut notes = Vec::new();

    let f7 = verdicts.iter().find(|v| v.name == Hypothesis::F7).cloned();
    if let Some(v) = f7.filter(|v| !v.holds) {
        if !config.waive_hypotheses {
            return Err(SolverError::Precondition {
                hypothesis: Hypothesis::F7,
                detail: v.witness,
            });
        }
    }

    let h1 = find(&verdicts, Hypothesis::H1);
    if m0.is_some() && !h1 && !config.waive_hypotheses {
        let detail = verdicts
            .iter()
            .find(|v| v.name == Hypothesis::H1)
            .map(|v| v.witness.clone());
        return Err(SolverError::Precondition {
            hypothesis: Hypothesis::H1,
            detail: detail.unwrap_or_default(),
        });
    }
    let choice = if h1 {
        KappaChoice::LowerBound
    } else {
        KappaChoice::IntegralBound
    };
    if !h1 {
        notes.push(String::from(
            "integral-bound regime: kappa combines the user-supplied h0 with the integral of h; h0 is not a lower bound of h here",
        ));
    }

    let mu_min = pr.graph.mu_min();
    let ball = match mode {
        TwoSolutionMode::Radius { rho, beta } => {
            let constants = pr.ball_constants(rho, choice, config.grid_points)?;
            let beta_max = constants.beta_max;
            let beta = beta.unwrap_or(beta_max);
            if !(beta > 0.0 && beta <= beta_max) || !beta.is_finite() && !beta_max.is_infinite() {
                return Err(SolverError::NoValidBeta { beta, beta_max });
            }
            BallReport {
                mode,
                rho,
                beta,
                beta_bound: beta_max,
                constants,
            }
        }
        TwoSolutionMode::Level { m0, beta } => {
            if !(m0 > 0.0) {
                return Err(SolverError::InvalidConfig("M0 must be positive"));
            }
            let rho = m0 * m0 / (mu_min * pr.h0);
            let (max_f, argmax) = nonlinearity::max_abs_primitive(&pr.nl, m0, config.grid_points);
            let beta_max = if max_f == 0.0 {
                f64::INFINITY
            } else {
                m0 * m0 / (2.0 * mu_min * pr.h0 * max_f) - 1.0
            };
            let beta = beta.unwrap_or(beta_max);
            extras.m0 = Some(m0);
            extras.beta = Some(beta);
            let f8 = f_verdict(pr, Hypothesis::F8, &grid, &extras)?;
            let f8_holds = f8.holds;
            verdicts.push(f8);
            if !(beta > 0.0) || (!f8_holds && !config.waive_hypotheses) {
                return Err(SolverError::NoValidBeta { beta, beta_max });
            }
            let kappa = pr.kappa(choice)?;
            let constants = BallConstants {
                rho,
                kappa,
                kappa_choice: choice,
                radius: m0,
                max_abs_primitive: max_f,
                argmax,
                beta_max,
            };
            BallReport {
                mode,
                rho,
                beta,
                beta_bound: beta_max,
                constants,
            }
        }
    };

    let (lambda1, constants) = spectral_parts(pr)?;

    let mut ball_config = config.clone();
    ball_config.rho = Some(ball.rho);
    ball_config.waive_hypotheses = true;
    let small = ball_minimize(pr, &ball_config)?;
    if small.solution.kind == SolutionKind::Trivial {
        return Err(SolverError::CollapsedToTrivial);
    }
    let endpoint = spike_endpoint(pr)?;
    let pass = mountain_pass_from(pr, config, &vec![0.0; pr.interior_len()], endpoint)?;

    let mut first = small.solution;
    let mut second = pass.solution;
    let distance = first
        .u
        .0
        .iter()
        .zip(&second.u.0)
        .map(|(a, b)| math::abs(a - b))
        .fold(0.0, f64::max);
    if distance < DISTINCT_TOL {
        return Err(SolverError::Coincident { distance });
    }
    let radius = math::sqrt(ball.rho);
    first.rho = Some(ball.rho);
    first.in_ball = Some(first.h_norm < radius);
    second.rho = Some(ball.rho);
    second.in_ball = Some(second.h_norm < radius);
    if pass.newton_handoff {
        notes.push(String::from(
            "deformation handed off to Newton before reaching deform_tol",
        ));
    }

    let mut trace = small.trace;
    let ps = ps_diagnostic(&pass.trace);
    trace.extend(pass.trace);
    Ok(SolveReport {
        solutions: vec![first, second],
        hypothesis_verdicts: verdicts,
        lambda1,
        constants,
        ball: Some(ball),
        iteration_trace: trace,
        ps_diagnostic: ps,
        endpoint: Some(pass.endpoint),
        snapshots: pass.snapshots,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{DomainPartition, EdgeSpec, MeasureMode, VertexSpec, WeightedGraph};
    use crate::nonlinearity::Nonlinearity;

    fn path3(nl: Nonlinearity) -> Problem {
        let g = WeightedGraph::build(
            &["a", "b", "c"].map(VertexSpec::auto),
            &[EdgeSpec::new("a", "b", 1.0), EdgeSpec::new("b", "c", 1.0)],
            MeasureMode::Derived,
        )
        .unwrap();
        let p = DomainPartition::compute_by_ids(&g, &["b"]).unwrap();
        Problem::new(g, p, GraphFunction::constant(3, 1.0), nl, 1.0).unwrap()
    }

    #[test]
    fn spike_doubles_to_two() {
        let pr = path3(Nonlinearity::power(4.0).unwrap());
        let e = build_spike_endpoint(&pr, &SolverConfig::default()).unwrap();
        assert_eq!(e.vertex, 1);
        assert_eq!(e.t, 2.0);
        assert!(e.phi <= 0.0);
        assert_eq!(e.e.0, vec![0.0, 2.0, 0.0]);
    }

    #[test]
    fn mountain_pass_power_four() {
        let pr = path3(Nonlinearity::power(4.0).unwrap());
        let out = mountain_pass(&pr, &SolverConfig::default()).unwrap();
        let s = &out.solution;
        assert!((s.u[1] - 2f64.sqrt()).abs() < 1e-12);
        assert!((s.phi_value - 2.0).abs() < 1e-12);
        assert!(s.residual_max <= 1e-12);
        assert_eq!(s.kind, SolutionKind::MountainPass);
    }

    #[test]
    fn ball_minimize_finds_trivial_for_pure_power() {
        let pr = path3(Nonlinearity::power(4.0).unwrap());
        let cfg = SolverConfig {
            rho: Some(1.0),
            ..Default::default()
        };
        let out = ball_minimize(&pr, &cfg).unwrap();
        assert_eq!(out.solution.kind, SolutionKind::Trivial);
        assert_eq!(out.solution.phi_value, 0.0);
    }

    #[test]
    fn ball_minimize_requires_rho() {
        let pr = path3(Nonlinearity::power_plus_const(4.0, 0.1).unwrap());
        assert_eq!(
            ball_minimize(&pr, &SolverConfig::default()).unwrap_err(),
            SolverError::MissingRho
        );
    }

    #[test]
    fn config_validation() {
        let bad = SolverConfig {
            path_points: 2,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = SolverConfig {
            step_rule: StepRule::Backtracking {
                shrink: 1.5,
                armijo: 0.1,
            },
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn two_solutions_gate_cites_f7() {
        let pr = path3(Nonlinearity::power(4.0).unwrap());
        let err = two_solutions(
            &pr,
            &SolverConfig::default(),
            TwoSolutionMode::Radius {
                rho: 1.0,
                beta: None,
            },
        )
        .unwrap_err();
        let msg = alloc::string::ToString::to_string(&err);
        assert!(matches!(
            err,
            SolverError::Precondition {
                hypothesis: Hypothesis::F7,
                ..
            }
        ));
        assert!(msg.contains("f(x,0) != 0"), "{msg}");
    }
}

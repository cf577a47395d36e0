//! Nonlinearity families f(x,u) with primitive F and derivative f_u, and the
//! sampled verifiers for the structural hypotheses on h and f.
//!
//! Semi-infinite conditions (growth, Ambrosetti–Rabinowitz, monotonicity,
//! superlinearity, the small-ball bound) are checked on a finite grid and
//! reported as holding on the sampled range only.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{DomainPartition, GraphFunction, WeightedGraph};
use crate::math::{self, Num};

/// Relative slack for the inequality checks, absorbing last-bit rounding in
/// cases that hold with equality (e.g. θF = u f for pure powers).
pub const CHECK_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "family", rename_all = "snake_case"))]
pub enum Family {
    /// f = |u|^{p−2} u.
    Power { p: f64 },
    /// f = |u|^{p−2} u + eps.
    PowerPlusConst { p: f64, eps: f64 },
    /// f = Σ c_k u^k over odd k, stored as `(k, c_k)` in ascending k.
    OddPoly { coefficients: Vec<(u32, f64)> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum NonlinearityError {
    /// Pure-power families need p > 2.
    ExponentTooSmall(f64),
    EvenDegree(u32),
    EmptyPolynomial,
    NonFinite(&'static str),
    MissingConstant {
        hypothesis: Hypothesis,
        name: &'static str,
    },
    InvalidConstant {
        name: &'static str,
        value: f64,
    },
    GridTooSmall(usize),
    /// No grid point with |u| ≥ M, so the condition would hold vacuously.
    EmptyTail {
        m: f64,
        half_width: f64,
    },
    /// F(x, ±M) ≤ 0, so ln F is undefined.
    NonpositivePrimitive {
        u: f64,
        value: f64,
    },
    NotAFunctionCheck(Hypothesis),
}

impl fmt::Display for NonlinearityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ExponentTooSmall(p) => write!(f, "power exponent must exceed 2, got {p}"),
            Self::EvenDegree(k) => write!(f, "odd_poly only takes odd powers, got c{k}"),
            Self::EmptyPolynomial => write!(f, "odd_poly needs at least one coefficient"),
            Self::NonFinite(name) => write!(f, "parameter {name} is not finite"),
            Self::MissingConstant { hypothesis, name } => {
                write!(f, "{hypothesis} check requires the constant {name}")
            }
            Self::InvalidConstant { name, value } => write!(f, "invalid value {value} for {name}"),
            Self::GridTooSmall(n) => write!(f, "sampling grid needs at least 2 points, got {n}"),
            Self::EmptyTail { m, half_width } => write!(
                f,
                "no sampled point with |u| >= {m} on [-{half_width}, {half_width}]"
            ),
            Self::NonpositivePrimitive { u, value } => {
                write!(
                    f,
                    "F(x,M) <= 0 at u = {u} (F = {value}); the AR condition fails at M"
                )
            }
            Self::NotAFunctionCheck(h) => write!(f, "{h} is not a condition on f"),
        }
    }
}

impl core::error::Error for NonlinearityError {}

/// A nonlinearity family plus the optional constants the hypothesis checks
/// consume.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Nonlinearity {
    pub family: Family,
    pub ar_theta: Option<f64>,
    pub ar_m: Option<f64>,
    pub growth_c: Option<f64>,
    pub growth_p: Option<f64>,
}

impl Nonlinearity {
    pub fn power(p: f64) -> Result<Self, NonlinearityError> {
        check_exponent(p)?;
        Ok(Self::from_family(Family::Power { p }))
    }

    pub fn power_plus_const(p: f64, eps: f64) -> Result<Self, NonlinearityError> {
        check_exponent(p)?;
        if !eps.is_finite() {
            return Err(NonlinearityError::NonFinite("eps"));
        }
        Ok(Self::from_family(Family::PowerPlusConst { p, eps }))
    }

    /// `coefficients` are `(k, c_k)` pairs with odd k; repeated degrees add.
    pub fn odd_poly(coefficients: &[(u32, f64)]) -> Result<Self, NonlinearityError> {
        if coefficients.is_empty() {
            return Err(NonlinearityError::EmptyPolynomial);
        }
        let mut merged: Vec<(u32, f64)> = Vec::new();
        for &(k, c) in coefficients {
            if k % 2 == 0 {
                return Err(NonlinearityError::EvenDegree(k));
            }
            if !c.is_finite() {
                return Err(NonlinearityError::NonFinite("coefficient"));
            }
            match merged.iter_mut().find(|(j, _)| *j == k) {
                Some(entry) => entry.1 += c,
                None => merged.push((k, c)),
            }
        }
        merged.sort_by_key(|&(k, _)| k);
        Ok(Self::from_family(Family::OddPoly {
            coefficients: merged,
        }))
    }

    fn from_family(family: Family) -> Self {
        Self {
            family,
            ar_theta: None,
            ar_m: None,
            growth_c: None,
            growth_p: None,
        }
    }

    pub fn with_ar(mut self, theta: f64, m: f64) -> Self {
        self.ar_theta = Some(theta);
        self.ar_m = Some(m);
        self
    }

    pub fn with_growth(mut self, c: f64, p: f64) -> Self {
        self.growth_c = Some(c);
        self.growth_p = Some(p);
        self
    }

    /// `(f, F, f_u)` at `u`. Built-in families ignore the vertex.
    pub fn evaluate(&self, _x: usize, u: f64) -> (f64, f64, f64) {
        match &self.family {
            Family::Power { p } => power_triple(*p, u),
            Family::PowerPlusConst { p, eps } => {
                let (f, big_f, fu) = power_triple(*p, u);
                (f + eps, big_f + eps * u, fu)
            }
            Family::OddPoly { coefficients } => {
                let mut f = 0.0;
                let mut big_f = 0.0;
                let mut fu = 0.0;
                for &(k, c) in coefficients {
                    f += c * math::powi(u, k);
                    big_f += c * math::powi(u, k + 1) / (k + 1) as f64;
                    fu += c * k as f64 * if k == 0 { 0.0 } else { math::powi(u, k - 1) };
                }
                (f, big_f, fu)
            }
        }
    }

    pub fn f(&self, x: usize, u: f64) -> f64 {
        self.evaluate(x, u).0
    }

    pub fn primitive(&self, x: usize, u: f64) -> f64 {
        self.evaluate(x, u).1
    }

    /// Whether f(x, 0) = 0, i.e. u ≡ 0 solves the equation.
    pub fn vanishes_at_zero(&self) -> bool {
        self.f(0, 0.0) == 0.0
    }

    /// A constant pair (C, p) with |f(u)| ≤ C(1 + |u|^{p−1}) for every u,
    /// read off the closed form. Explicit `growth_*` fields take precedence.
    pub fn growth_constants(&self) -> (f64, f64) {
        if let (Some(c), Some(p)) = (self.growth_c, self.growth_p) {
            return (c, p);
        }
        match &self.family {
            Family::Power { p } => (1.0, *p),
            Family::PowerPlusConst { p, eps } => (math::abs(*eps).max(1.0), *p),
            Family::OddPoly { coefficients } => {
                let degree = coefficients.last().map_or(1, |&(k, _)| k);
                let c: f64 = coefficients.iter().map(|&(_, c)| math::abs(c)).sum();
                (c.max(f64::MIN_POSITIVE), (degree as f64 + 1.0).max(3.0))
            }
        }
    }

    /// A starting (θ, M) for the Ambrosetti–Rabinowitz check, when the family
    /// is superquadratic with a positive leading term. The pair still has to
    /// pass [`check_f`]. Explicit `ar_*` fields take precedence.
    pub fn ar_constants(&self) -> Option<(f64, f64)> {
        if let (Some(t), Some(m)) = (self.ar_theta, self.ar_m) {
            return Some((t, m));
        }
        match &self.family {
            Family::Power { p } => Some((*p, 1.0)),
            Family::PowerPlusConst { p, eps } => {
                let theta = (p + 2.0) / 2.0;
                let e = math::abs(*eps);
                // u f − θF = (1 − θ/p)|u|^p − (θ − 1) eps u and θF > 0 both
                // hold once |u|^{p−1} dominates these multiples of eps.
                let need = (2.0 * p * e * (theta - 1.0) / (p - 2.0)).max(p * e);
                let m = (2.0 * math::powf(need, 1.0 / (p - 1.0))).max(2.0);
                Some((theta, m))
            }
            Family::OddPoly { coefficients } => {
                let &(degree, lead) = coefficients.last()?;
                if degree < 3 || !(lead > 0.0) {
                    return None;
                }
                let rest: f64 = coefficients[..coefficients.len() - 1]
                    .iter()
                    .map(|&(_, c)| math::abs(c))
                    .sum();
                let theta = (degree as f64 + 3.0) / 2.0;
                Some((theta, 2.0 * (1.0 + rest / lead)))
            }
        }
    }

    /// Analytic smoothness statement for the family.
    pub fn smoothness(&self) -> String {
        match &self.family {
            Family::Power { p } | Family::PowerPlusConst { p, .. } if *p < 3.0 => format!(
                "f is C^1 (f_u = (p-1)|u|^(p-2) is continuous for p = {p} > 2) but not C^2 at u = 0"
            ),
            Family::Power { .. } | Family::PowerPlusConst { .. } => {
                "f is C^1 in u (closed-form power, p >= 3)".into()
            }
            Family::OddPoly { .. } => "f is a polynomial in u, hence C^infinity".into(),
        }
    }

    /// Short human-readable description, e.g. `power(p=4)`.
    pub fn describe(&self) -> String {
        match &self.family {
            Family::Power { p } => format!("power(p={p})"),
            Family::PowerPlusConst { p, eps } => format!("power_plus_const(p={p},eps={eps})"),
            Family::OddPoly { coefficients } => {
                let terms: Vec<String> = coefficients
                    .iter()
                    .map(|(k, c)| format!("c{k}={c}"))
                    .collect();
                format!("odd_poly({})", terms.join(","))
            }
        }
    }
}

fn check_exponent(p: f64) -> Result<(), NonlinearityError> {
    if !p.is_finite() {
        return Err(NonlinearityError::NonFinite("p"));
    }
    if !(p > 2.0) {
        return Err(NonlinearityError::ExponentTooSmall(p));
    }
    Ok(())
}

fn power_triple(p: f64, u: f64) -> (f64, f64, f64) {
    let a = math::abs(u);
    let a_pm2 = math::powf(a, p - 2.0);
    (a_pm2 * u, a_pm2 * a * a / p, (p - 1.0) * a_pm2)
}

/// Names of the checked hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Hypothesis {
    H1,
    H2,
    H3,
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
}

impl Hypothesis {
    pub fn name(self) -> &'static str {
        match self {
            Self::H1 => "H1",
            Self::H2 => "H2",
            Self::H3 => "H3",
            Self::F1 => "F1",
            Self::F2 => "F2",
            Self::F3 => "F3",
            Self::F4 => "F4",
            Self::F5 => "F5",
            Self::F6 => "F6",
            Self::F7 => "F7",
            Self::F8 => "F8",
        }
    }

    /// One-line statement of the condition.
    pub fn statement(self) -> &'static str {
        match self {
            Self::H1 => "h(x) >= h0 > 0 on the interior",
            Self::H2 => "1/h is integrable on the interior",
            Self::H3 => "integral of h over the interior <= 1/(mu_min h0)",
            Self::F1 => "f is C^1",
            Self::F2 => "f(x,0) = 0 = f_u(x,0)",
            Self::F3 => "|f(x,u)| <= C(1 + |u|^(p-1))",
            Self::F4 => "0 < theta F(x,u) <= u f(x,u) for |u| >= M",
            Self::F5 => "f(x,u)/u nondecreasing for u > 0",
            Self::F6 => "f(x,u)/u -> +infinity as u -> infinity",
            Self::F7 => "f(x,0) != 0",
            Self::F8 => "max |F| on [-M0, M0] <= M0^2 / (2(beta+1) mu_min h0)",
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SampledRange {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HypothesisVerdict {
    pub name: Hypothesis,
    pub holds: bool,
    /// The failing point, or the certified bound when the check passes.
    pub witness: String,
    /// `None` for exact or analytic checks.
    pub sampled_range: Option<SampledRange>,
}

impl HypothesisVerdict {
    fn exact(name: Hypothesis, holds: bool, witness: String) -> Self {
        Self {
            name,
            holds,
            witness,
            sampled_range: None,
        }
    }

    fn sampled(name: Hypothesis, holds: bool, witness: String, grid: &GridSpec) -> Self {
        Self {
            name,
            holds,
            witness,
            sampled_range: Some(SampledRange {
                lo: -grid.half_width,
                hi: grid.half_width,
                points: grid.points,
            }),
        }
    }
}

/// Uniform sampling of [−U, U] with `points` points, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub half_width: f64,
    pub points: usize,
}

impl GridSpec {
    pub const DEFAULT_POINTS: usize = 10_001;

    pub fn new(half_width: f64, points: usize) -> Self {
        Self { half_width, points }
    }

    /// 10 001 points on [−U, U] with U = max(10, 2M, 2M0).
    pub fn default_for(m: Option<f64>, m0: Option<f64>) -> Self {
        let u = [10.0, 2.0 * m.unwrap_or(0.0), 2.0 * m0.unwrap_or(0.0)]
            .into_iter()
            .fold(0.0, f64::max);
        Self::new(u, Self::DEFAULT_POINTS)
    }

    fn validate(&self) -> Result<(), NonlinearityError> {
        if self.points < 2 {
            return Err(NonlinearityError::GridTooSmall(self.points));
        }
        if !(self.half_width > 0.0) || !self.half_width.is_finite() {
            return Err(NonlinearityError::InvalidConstant {
                name: "half_width",
                value: self.half_width,
            });
        }
        Ok(())
    }

    /// The i-th grid point; the integer numerator keeps u = 0 and
    /// simple fractions of U exact.
    pub fn point(&self, i: usize) -> f64 {
        let n1 = (self.points - 1) as f64;
        (2.0 * i as f64 - n1) * self.half_width / n1
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(move |i| self.point(i))
    }
}

/// Extra constants some checks need.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CheckExtras {
    pub theta: Option<f64>,
    pub m: Option<f64>,
    pub growth_c: Option<f64>,
    pub growth_p: Option<f64>,
    pub m0: Option<f64>,
    pub beta: Option<f64>,
    pub mu_min: Option<f64>,
    pub h0: Option<f64>,
    /// Optional floor for f(U)/U in the superlinearity proxy.
    pub f6_threshold: Option<f64>,
}

/// Which hypothesis on h to verify.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HCheck {
    H1 { h0: f64 },
    H2,
    H3 { h0: f64 },
}

/// Checks a hypothesis on the potential h over Ω.
pub fn check_h(
    graph: &WeightedGraph,
    partition: &DomainPartition,
    h: &GraphFunction,
    which: HCheck,
) -> HypothesisVerdict {
    let omega = partition.omega();
    match which {
        HCheck::H1 { h0 } => {
            let (xmin, hmin) =
                omega
                    .iter()
                    .map(|&x| (x, h[x]))
                    .fold(
                        (omega[0], f64::INFINITY),
                        |a, b| if b.1 < a.1 { b } else { a },
                    );
            let holds = h0 > 0.0 && hmin >= h0;
            let witness = if holds {
                format!(
                    "min h = {} >= h0 = {} (at {})",
                    Num(hmin),
                    Num(h0),
                    graph.id(xmin)
                )
            } else if !(h0 > 0.0) {
                format!("h0 = {} is not positive", Num(h0))
            } else {
                format!("h({}) = {} < h0 = {}", graph.id(xmin), Num(hmin), Num(h0))
            };
            HypothesisVerdict::exact(Hypothesis::H1, holds, witness)
        }
        HCheck::H2 => match omega.iter().find(|&&x| h[x] == 0.0 || !h[x].is_finite()) {
            Some(&x) => HypothesisVerdict::exact(
                Hypothesis::H2,
                false,
                format!(
                    "h({}) = {}, so 1/h is not finite there",
                    graph.id(x),
                    Num(h[x])
                ),
            ),
            None => {
                let s: f64 = omega
                    .iter()
                    .map(|&x| graph.measure(x) / math::abs(h[x]))
                    .sum();
                HypothesisVerdict::exact(
                    Hypothesis::H2,
                    true,
                    format!("integral of 1/|h| = {}", Num(s)),
                )
            }
        },
        HCheck::H3 { h0 } => {
            let integral: f64 = omega.iter().map(|&x| graph.measure(x) * h[x]).sum();
            let bound = 1.0 / (graph.mu_min() * h0);
            let holds = h0 > 0.0 && integral <= bound;
            let rel = if holds { "<=" } else { ">" };
            HypothesisVerdict::exact(
                Hypothesis::H3,
                holds,
                format!(
                    "integral of h = {} {rel} 1/(mu_min h0) = {}",
                    Num(integral),
                    Num(bound)
                ),
            )
        }
    }
}

fn require(
    value: Option<f64>,
    hypothesis: Hypothesis,
    name: &'static str,
) -> Result<f64, NonlinearityError> {
    value.ok_or(NonlinearityError::MissingConstant { hypothesis, name })
}

/// Checks a hypothesis on f. Sampled checks run on `grid`; F2, F7 are exact
/// at u = 0 and F1 is analytic.
pub fn check_f(
    nl: &Nonlinearity,
    which: Hypothesis,
    grid: &GridSpec,
    extras: &CheckExtras,
) -> Result<HypothesisVerdict, NonlinearityError> {
    grid.validate()?;
    let eval = |u: f64| nl.evaluate(0, u);
    match which {
        Hypothesis::F1 => Ok(HypothesisVerdict::exact(
            Hypothesis::F1,
            true,
            nl.smoothness(),
        )),
        Hypothesis::F2 => {
            let (f0, _, fu0) = eval(0.0);
            Ok(HypothesisVerdict::exact(
                Hypothesis::F2,
                f0 == 0.0 && fu0 == 0.0,
                format!("f(0) = {}, f_u(0) = {}", Num(f0), Num(fu0)),
            ))
        }
        Hypothesis::F7 => {
            let (f0, _, _) = eval(0.0);
            Ok(HypothesisVerdict::exact(
                Hypothesis::F7,
                f0 != 0.0,
                format!("f(0) = {}", Num(f0)),
            ))
        }
        Hypothesis::F3 => {
            let c = extras.growth_c.or(nl.growth_c);
            let p = extras.growth_p.or(nl.growth_p);
            let c = require(c, which, "C")?;
            let p = require(p, which, "p")?;
            if !(c > 0.0) {
                return Err(NonlinearityError::InvalidConstant {
                    name: "C",
                    value: c,
                });
            }
            if !(p > 2.0) {
                return Err(NonlinearityError::InvalidConstant {
                    name: "p",
                    value: p,
                });
            }
            let mut worst = (f64::NEG_INFINITY, 0.0);
            for u in grid.iter() {
                let ratio = math::abs(eval(u).0) / (c * (1.0 + math::powf(math::abs(u), p - 1.0)));
                if ratio > worst.0 {
                    worst = (ratio, u);
                }
            }
            let holds = worst.0 <= 1.0 + CHECK_SLACK;
            let witness = if holds {
                format!(
                    "max |f|/(C(1+|u|^(p-1))) = {} at u = {} (C = {c}, p = {p})",
                    Num(worst.0),
                    Num(worst.1)
                )
            } else {
                format!(
                    "|f({})| exceeds C(1+|u|^(p-1)) by factor {} (C = {c}, p = {p})",
                    Num(worst.1),
                    Num(worst.0)
                )
            };
            Ok(HypothesisVerdict::sampled(which, holds, witness, grid))
        }
        Hypothesis::F4 => {
            let theta = require(extras.theta.or(nl.ar_theta), which, "theta")?;
            let m = require(extras.m.or(nl.ar_m), which, "M")?;
            if !(theta > 2.0) {
                return Err(NonlinearityError::InvalidConstant {
                    name: "theta",
                    value: theta,
                });
            }
            if !(m > 0.0) {
                return Err(NonlinearityError::InvalidConstant {
                    name: "M",
                    value: m,
                });
            }
            let mut tail = 0usize;
            let mut min_gap = (f64::INFINITY, 0.0);
            for u in grid.iter().filter(|u| math::abs(*u) >= m) {
                tail += 1;
                let (f, big_f, _) = eval(u);
                let lhs = theta * big_f;
                let rhs = u * f;
                if !(lhs > 0.0) {
                    return Ok(HypothesisVerdict::sampled(
                        which,
                        false,
                        format!("theta F({}) = {} is not positive", Num(u), Num(lhs)),
                        grid,
                    ));
                }
                let slack = CHECK_SLACK * math::abs(lhs).max(math::abs(rhs));
                if lhs > rhs + slack {
                    return Ok(HypothesisVerdict::sampled(
                        which,
                        false,
                        format!("theta F({}) = {} > u f(u) = {}", Num(u), Num(lhs), Num(rhs)),
                        grid,
                    ));
                }
                let gap = (rhs - lhs) / rhs;
                if gap < min_gap.0 {
                    min_gap = (gap, u);
                }
            }
            if tail == 0 {
                return Err(NonlinearityError::EmptyTail {
                    m,
                    half_width: grid.half_width,
                });
            }
            Ok(HypothesisVerdict::sampled(
                which,
                true,
                format!(
                    "min (u f - theta F)/(u f) = {} at u = {} over {tail} points with |u| >= {m} (theta = {theta})",
                    Num(min_gap.0),
                    Num(min_gap.1)
                ),
                grid,
            ))
        }
        Hypothesis::F5 => {
            let mut prev: Option<(f64, f64)> = None;
            for u in grid.iter().filter(|u| *u > 0.0) {
                let q = eval(u).0 / u;
                if let Some((pu, pq)) = prev {
                    if q < pq - CHECK_SLACK * math::abs(pq).max(1.0) {
                        return Ok(HypothesisVerdict::sampled(
                            which,
                            false,
                            format!(
                                "f(u)/u drops from {} at u = {} to {} at u = {}",
                                Num(pq),
                                Num(pu),
                                Num(q),
                                Num(u)
                            ),
                            grid,
                        ));
                    }
                }
                prev = Some((u, q));
            }
            let witness = match prev {
                Some((u, q)) => format!(
                    "f(u)/u nondecreasing on sampled u > 0, reaching {} at u = {}",
                    Num(q),
                    Num(u)
                ),
                None => "no positive sample points".into(),
            };
            Ok(HypothesisVerdict::sampled(
                which,
                prev.is_some(),
                witness,
                grid,
            ))
        }
        Hypothesis::F6 => {
            let positive: Vec<f64> = grid.iter().filter(|u| *u > 0.0).collect();
            if positive.len() < 2 {
                return Err(NonlinearityError::GridTooSmall(positive.len()));
            }
            let tail_len = (positive.len() / 10).max(2);
            let tail = &positive[positive.len() - tail_len..];
            let ratios: Vec<f64> = tail.iter().map(|&u| eval(u).0 / u).collect();
            if let Some(i) = (1..ratios.len()).find(|&i| !(ratios[i] > ratios[i - 1])) {
                return Ok(HypothesisVerdict::sampled(
                    which,
                    false,
                    format!(
                        "proxy: f(u)/u does not increase from u = {} ({}) to u = {} ({})",
                        Num(tail[i - 1]),
                        Num(ratios[i - 1]),
                        Num(tail[i]),
                        Num(ratios[i])
                    ),
                    grid,
                ));
            }
            let u_max = *tail.last().unwrap_or(&0.0);
            let top = *ratios.last().unwrap_or(&0.0);
            if let Some(t) = extras.f6_threshold {
                if !(top >= t) {
                    return Ok(HypothesisVerdict::sampled(
                        which,
                        false,
                        format!(
                            "proxy: f(U)/U = {} < threshold {} at U = {}",
                            Num(top),
                            Num(t),
                            Num(u_max)
                        ),
                        grid,
                    ));
                }
            }
            Ok(HypothesisVerdict::sampled(
                which,
                true,
                format!(
                    "proxy: f(u)/u strictly increasing on the top {tail_len} samples, f(U)/U = {} at U = {}",
                    Num(top),
                    Num(u_max)
                ),
                grid,
            ))
        }
        Hypothesis::F8 => {
            let m0 = require(extras.m0, which, "M0")?;
            let beta = require(extras.beta, which, "beta")?;
            let mu_min = require(extras.mu_min, which, "mu_min")?;
            let h0 = require(extras.h0, which, "h0")?;
            for (name, v) in [("M0", m0), ("mu_min", mu_min), ("h0", h0)] {
                if !(v > 0.0) {
                    return Err(NonlinearityError::InvalidConstant { name, value: v });
                }
            }
            if !(beta >= 0.0) {
                return Err(NonlinearityError::InvalidConstant {
                    name: "beta",
                    value: beta,
                });
            }
            let (max_f, at) = max_abs_primitive(nl, m0, grid.points);
            let bound = m0 * m0 / (2.0 * (beta + 1.0) * mu_min * h0);
            let holds = max_f <= bound;
            let rel = if holds { "<=" } else { ">" };
            let sub = GridSpec::new(m0, grid.points);
            Ok(HypothesisVerdict::sampled(
                which,
                holds,
                format!(
                    "max |F| = {} at u = {} {rel} bound {} (M0 = {m0}, beta = {beta})",
                    Num(max_f),
                    Num(at),
                    Num(bound)
                ),
                &sub,
            ))
        }
        Hypothesis::H1 | Hypothesis::H2 | Hypothesis::H3 => {
            Err(NonlinearityError::NotAFunctionCheck(which))
        }
    }
}

/// max |F(u)| over `points` uniform samples of [−radius, radius] and its argmax.
pub fn max_abs_primitive(nl: &Nonlinearity, radius: f64, points: usize) -> (f64, f64) {
    let grid = GridSpec::new(radius, points.max(2));
    grid.iter()
        .map(|u| (math::abs(nl.primitive(0, u)), u))
        .fold((0.0, 0.0), |a, b| if b.0 > a.0 { b } else { a })
}

/// Constants of the lower bound F(u) ≥ e^{−c}|u|^θ − C implied by the
/// Ambrosetti–Rabinowitz condition, and its sampled verification.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ArLowerBound {
    pub theta: f64,
    pub m: f64,
    /// θ ln M − ln F(M), used for u ≥ M.
    pub c_plus: f64,
    /// θ ln M − ln F(−M), used for u ≤ −M.
    pub c_minus: f64,
    /// Shift making the bound hold on |u| < M as well.
    pub big_c: f64,
    /// F(M) − e^{−c₊} M^θ, zero up to rounding.
    pub gap_at_m: f64,
    pub verdict: HypothesisVerdict,
}

/// Evaluates the logarithmic integration constants at ±M and checks the
/// resulting lower bound on every grid point. The shift `big_c` covers the
/// points with |u| < M; on |u| ≥ M the bound is checked without shift.
pub fn ar_lower_bound(
    nl: &Nonlinearity,
    theta: f64,
    m: f64,
    grid: &GridSpec,
) -> Result<ArLowerBound, NonlinearityError> {
    grid.validate()?;
    if !(theta > 2.0) {
        return Err(NonlinearityError::InvalidConstant {
            name: "theta",
            value: theta,
        });
    }
    if !(m > 0.0) {
        return Err(NonlinearityError::InvalidConstant {
            name: "M",
            value: m,
        });
    }
    let f_plus = nl.primitive(0, m);
    let f_minus = nl.primitive(0, -m);
    for (u, value) in [(m, f_plus), (-m, f_minus)] {
        if !(value > 0.0) {
            return Err(NonlinearityError::NonpositivePrimitive { u, value });
        }
    }
    let c_plus = theta * math::ln(m) - math::ln(f_plus);
    let c_minus = theta * math::ln(m) - math::ln(f_minus);
    let bound = |u: f64| {
        let c = if u >= 0.0 { c_plus } else { c_minus };
        math::exp(-c) * math::powf(math::abs(u), theta)
    };

    let mut big_c: f64 = 0.0;
    for u in grid.iter().filter(|u| math::abs(*u) < m) {
        big_c = big_c.max(bound(u) - nl.primitive(0, u));
    }
    let mut worst = (f64::INFINITY, 0.0);
    for u in grid.iter().filter(|u| math::abs(*u) >= m) {
        let big_f = nl.primitive(0, u);
        let b = bound(u);
        let margin = (big_f - b) / b.max(f64::MIN_POSITIVE);
        if margin < worst.0 {
            worst = (margin, u);
        }
    }
    if worst.0.is_infinite() {
        return Err(NonlinearityError::EmptyTail {
            m,
            half_width: grid.half_width,
        });
    }
    let gap_at_m = f_plus - bound(m);
    let holds = worst.0 >= -CHECK_SLACK;
    let witness = if holds {
        format!(
            "min (F - e^-c |u|^theta)/(e^-c |u|^theta) = {} at u = {}; c+ = {}, c- = {}, C = {}",
            Num(worst.0),
            Num(worst.1),
            Num(c_plus),
            Num(c_minus),
            Num(big_c)
        )
    } else {
        format!(
            "F({}) falls below e^-c |u|^theta by relative {}",
            Num(worst.1),
            Num(-worst.0)
        )
    };
    Ok(ArLowerBound {
        theta,
        m,
        c_plus,
        c_minus,
        big_c,
        gap_at_m,
        verdict: HypothesisVerdict::sampled(Hypothesis::F4, holds, witness, grid),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::default_for(Some(2.0), None)
    }

    #[test]
    fn evaluate_examples() {
        let p4 = Nonlinearity::power(4.0).unwrap();
        assert_eq!(p4.evaluate(0, 2.0), (8.0, 4.0, 12.0));
        let ppc = Nonlinearity::power_plus_const(4.0, 0.1).unwrap();
        assert_eq!(ppc.evaluate(0, 0.0), (0.1, 0.0, 0.0));
        let poly = Nonlinearity::odd_poly(&[(1, -1.0), (3, 1.0)]).unwrap();
        for nl in [&p4, &ppc, &poly] {
            assert_eq!(nl.evaluate(0, 0.0).1, 0.0);
        }
        assert_eq!(poly.evaluate(0, 2.0), (6.0, 2.0, 11.0));
    }

    #[test]
    fn family_invariants() {
        assert_eq!(
            Nonlinearity::power(2.0),
            Err(NonlinearityError::ExponentTooSmall(2.0))
        );
        assert!(Nonlinearity::power_plus_const(1.5, 0.1).is_err());
        assert_eq!(
            Nonlinearity::odd_poly(&[(2, 1.0)]),
            Err(NonlinearityError::EvenDegree(2))
        );
        assert_eq!(
            Nonlinearity::odd_poly(&[]),
            Err(NonlinearityError::EmptyPolynomial)
        );
    }

    #[test]
    fn f4_power_equality_case() {
        let p4 = Nonlinearity::power(4.0).unwrap();
        let extras = CheckExtras {
            theta: Some(4.0),
            m: Some(1.0),
            ..Default::default()
        };
        let v = check_f(&p4, Hypothesis::F4, &grid(), &extras).unwrap();
        assert!(v.holds, "{}", v.witness);
    }

    #[test]
    fn f4_power_plus_const() {
        let ppc = Nonlinearity::power_plus_const(4.0, 0.1).unwrap();
        let extras = CheckExtras {
            theta: Some(3.0),
            m: Some(2.0),
            ..Default::default()
        };
        let v = check_f(&ppc, Hypothesis::F4, &grid(), &extras).unwrap();
        assert!(v.holds, "{}", v.witness);
        assert_eq!(ppc.ar_constants(), Some((3.0, 2.0)));
    }

    #[test]
    fn f4_failure_has_witness() {
        // θ = 5 exceeds the exponent: θF = 5u⁴/4 > u⁴
        let p4 = Nonlinearity::power(4.0).unwrap();
        let extras = CheckExtras {
            theta: Some(5.0),
            m: Some(1.0),
            ..Default::default()
        };
        let v = check_f(&p4, Hypothesis::F4, &grid(), &extras).unwrap();
        assert!(!v.holds);
        assert!(v.witness.contains("u f(u)"));
        let missing = check_f(&p4, Hypothesis::F4, &grid(), &CheckExtras::default());
        assert!(matches!(
            missing,
            Err(NonlinearityError::MissingConstant { .. })
        ));
    }

    #[test]
    fn f7_and_f2() {
        let ppc = Nonlinearity::power_plus_const(4.0, 0.1).unwrap();
        let v = check_f(&ppc, Hypothesis::F7, &grid(), &CheckExtras::default()).unwrap();
        assert!(v.holds);
        assert_eq!(v.witness, "f(0) = 0.1");
        let p4 = Nonlinearity::power(4.0).unwrap();
        assert!(
            !check_f(&p4, Hypothesis::F7, &grid(), &CheckExtras::default())
                .unwrap()
                .holds
        );
        assert!(
            check_f(&p4, Hypothesis::F2, &grid(), &CheckExtras::default())
                .unwrap()
                .holds
        );
        assert!(
            !check_f(&ppc, Hypothesis::F2, &grid(), &CheckExtras::default())
                .unwrap()
                .holds
        );
    }

    #[test]
    fn f5_fails_for_positive_shift() {
        // eps/u dominates near zero, so f(u)/u decreases there
        let ppc = Nonlinearity::power_plus_const(4.0, 0.1).unwrap();
        let v = check_f(&ppc, Hypothesis::F5, &grid(), &CheckExtras::default()).unwrap();
        assert!(!v.holds);
        assert!(v.witness.contains("drops"));
    }

    #[test]
    fn f6_threshold_is_optional() {
        let p4 = Nonlinearity::power(4.0).unwrap();
        let g = GridSpec::new(10.0, 1001);
        assert!(
            check_f(&p4, Hypothesis::F6, &g, &CheckExtras::default())
                .unwrap()
                .holds
        );
        let strict = CheckExtras {
            f6_threshold: Some(1e3),
            ..Default::default()
        };
        let v = check_f(&p4, Hypothesis::F6, &g, &strict).unwrap();
        assert!(!v.holds, "f(10)/10 = 100 is below 1000");
        let wide = GridSpec::new(40.0, 1001);
        assert!(check_f(&p4, Hypothesis::F6, &wide, &strict).unwrap().holds);
    }

    #[test]
    fn f8_bound() {
        let ppc = Nonlinearity::power_plus_const(4.0, 0.1).unwrap();
        // max |F| on [-1,1] is 0.35; bound 1/(2(β+1)) holds iff β ≤ 1/0.7 − 1
        let mut extras = CheckExtras {
            m0: Some(1.0),
            beta: Some(0.4),
            mu_min: Some(1.0),
            h0: Some(1.0),
            ..Default::default()
        };
        assert!(
            check_f(&ppc, Hypothesis::F8, &grid(), &extras)
                .unwrap()
                .holds
        );
        extras.beta = Some(0.5);
        assert!(
            !check_f(&ppc, Hypothesis::F8, &grid(), &extras)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn ar_bound_power_four() {
        let p4 = Nonlinearity::power(4.0).unwrap();
        let r = ar_lower_bound(&p4, 4.0, 1.0, &grid()).unwrap();
        assert!((r.c_plus - math::ln(4.0)).abs() < 1e-15);
        assert!(r.verdict.holds, "{}", r.verdict.witness);
        assert!(r.gap_at_m.abs() < 1e-15);
        // F(2) = 4 = e^{-c}·16
        assert!((math::exp(-r.c_plus) * 16.0 - 4.0).abs() < 1e-14);
    }

    #[test]
    fn ar_bound_rejects_nonpositive_primitive() {
        // F = -u²/2 + u⁴/4 is negative at u = 1
        let poly = Nonlinearity::odd_poly(&[(1, -1.0), (3, 1.0)]).unwrap();
        assert!(matches!(
            ar_lower_bound(&poly, 4.0, 1.0, &grid()),
            Err(NonlinearityError::NonpositivePrimitive { .. })
        ));
    }

    #[test]
    fn grid_hits_simple_points_exactly() {
        let g = GridSpec::new(10.0, 10_001);
        assert_eq!(g.point(5000), 0.0);
        assert_eq!(g.point(5500), 1.0);
        assert_eq!(g.point(6000), 2.0);
        assert_eq!(g.point(0), -10.0);
        assert_eq!(g.point(10_000), 10.0);
    }
}

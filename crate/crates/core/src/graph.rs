//! Finite weighted graphs, vertex measures and the interior/boundary split.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// How the vertex measure μ(x) is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum MeasureMode {
    /// Every vertex carries a user-supplied positive measure.
    Given,
    /// μ(x) = Σ_{y∼x} μ_xy.
    Derived,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexSpec {
    pub id: String,
    /// `None` requests the derived measure.
    pub measure: Option<f64>,
}

impl VertexSpec {
    pub fn auto(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            measure: None,
        }
    }

    pub fn with_measure(id: impl Into<String>, measure: f64) -> Self {
        Self {
            id: id.into(),
            measure: Some(measure),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSpec {
    pub a: String,
    pub b: String,
    pub weight: f64,
}

impl EdgeSpec {
    pub fn new(a: impl Into<String>, b: impl Into<String>, weight: f64) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
            weight,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphError {
    NonpositiveWeight { a: String, b: String, weight: f64 },
    NonpositiveMeasure { vertex: String, measure: f64 },
    MissingMeasure { vertex: String },
    MixedMeasureModes,
    ConflictingDuplicateEdge { a: String, b: String },
    SelfLoop { vertex: String },
    UnknownVertex { vertex: String },
    DuplicateVertex { vertex: String },
    EmptyGraph,
    EmptyOmega,
    BoundaryMismatch { vertex: String },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonpositiveWeight { a, b, weight } => {
                write!(f, "nonpositive weight {weight} on edge {a}-{b}")
            }
            Self::NonpositiveMeasure { vertex, measure } => {
                write!(f, "nonpositive measure {measure} at vertex {vertex}")
            }
            Self::MissingMeasure { vertex } => {
                write!(f, "vertex {vertex} has no measure in given-measure mode")
            }
            Self::MixedMeasureModes => {
                write!(f, "numeric and derived ('auto') measures cannot be mixed")
            }
            Self::ConflictingDuplicateEdge { a, b } => {
                write!(f, "duplicate edge {a}-{b} with conflicting weight")
            }
            Self::SelfLoop { vertex } => write!(f, "self-loop at vertex {vertex}"),
            Self::UnknownVertex { vertex } => write!(f, "unknown vertex id {vertex}"),
            Self::DuplicateVertex { vertex } => write!(f, "duplicate vertex id {vertex}"),
            Self::EmptyGraph => write!(f, "graph has no vertices"),
            Self::EmptyOmega => write!(f, "interior set is empty"),
            Self::BoundaryMismatch { vertex } => write!(
                f,
                "vertex {vertex} is labelled inconsistently with the computed boundary"
            ),
        }
    }
}

impl core::error::Error for GraphError {}

/// A finite graph with symmetric positive edge weights and a positive vertex
/// measure. Vertices are addressed by dense indices in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    ids: Vec<String>,
    index: BTreeMap<String, usize>,
    /// Neighbor lists in stored edge order.
    adjacency: Vec<Vec<(usize, f64)>>,
    edges: Vec<(usize, usize, f64)>,
    measure: Vec<f64>,
    mu_min: f64,
    mode: MeasureMode,
}

impl WeightedGraph {
    /// Validates the raw input and builds the graph.
    ///
    /// In [`MeasureMode::Derived`] every vertex spec must leave `measure`
    /// unset and μ(x) becomes the sum of incident weights; in
    /// [`MeasureMode::Given`] every vertex must carry a positive measure.
    /// A duplicate edge with an identical weight is merged.
    pub fn build(
        vertices: &[VertexSpec],
        edges: &[EdgeSpec],
        mode: MeasureMode,
    ) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::EmptyGraph);
        }
        let mut index = BTreeMap::new();
        let mut ids = Vec::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.id.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex {
                    vertex: v.id.clone(),
                });
            }
            ids.push(v.id.clone());
        }

        let n = vertices.len();
        let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut stored: Vec<(usize, usize, f64)> = Vec::with_capacity(edges.len());
        let mut seen: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for e in edges {
            let a = *index.get(&e.a).ok_or_else(|| GraphError::UnknownVertex {
                vertex: e.a.clone(),
            })?;
            let b = *index.get(&e.b).ok_or_else(|| GraphError::UnknownVertex {
                vertex: e.b.clone(),
            })?;
            if a == b {
                return Err(GraphError::SelfLoop {
                    vertex: e.a.clone(),
                });
            }
            if !(e.weight > 0.0) || !e.weight.is_finite() {
                return Err(GraphError::NonpositiveWeight {
                    a: e.a.clone(),
                    b: e.b.clone(),
                    weight: e.weight,
                });
            }
            let key = if a < b { (a, b) } else { (b, a) };
            if let Some(&w) = seen.get(&key) {
                if w != e.weight {
                    return Err(GraphError::ConflictingDuplicateEdge {
                        a: e.a.clone(),
                        b: e.b.clone(),
                    });
                }
                continue;
            }
            seen.insert(key, e.weight);
            adjacency[a].push((b, e.weight));
            adjacency[b].push((a, e.weight));
            stored.push((a, b, e.weight));
        }

        let mut measure = Vec::with_capacity(n);
        for (v, nbrs) in vertices.iter().zip(&adjacency) {
            let m = match (mode, v.measure) {
                (MeasureMode::Given, Some(m)) => m,
                (MeasureMode::Given, None) => {
                    return Err(GraphError::MissingMeasure {
                        vertex: v.id.clone(),
                    })
                }
                (MeasureMode::Derived, None) => nbrs.iter().map(|&(_, w)| w).sum(),
                (MeasureMode::Derived, Some(_)) => return Err(GraphError::MixedMeasureModes),
            };
            if !(m > 0.0) || !m.is_finite() {
                return Err(GraphError::NonpositiveMeasure {
                    vertex: v.id.clone(),
                    measure: m,
                });
            }
            measure.push(m);
        }
        let mu_min = measure.iter().copied().fold(f64::INFINITY, f64::min);

        Ok(Self {
            ids,
            index,
            adjacency,
            edges: stored,
            measure,
            mu_min,
            mode,
        })
    }

    /// Returns a copy with every edge weight multiplied by `factor`, and every
    /// measure too when the measure was given. Derived measures are rebuilt,
    /// so they scale by the same factor.
    pub fn scaled(&self, factor: f64) -> Result<Self, GraphError> {
        let vertices: Vec<VertexSpec> = self
            .ids
            .iter()
            .zip(&self.measure)
            .map(|(id, &m)| match self.mode {
                MeasureMode::Given => VertexSpec::with_measure(id.clone(), m * factor),
                MeasureMode::Derived => VertexSpec::auto(id.clone()),
            })
            .collect();
        let edges: Vec<EdgeSpec> = self
            .edges
            .iter()
            .map(|&(a, b, w)| EdgeSpec::new(self.ids[a].clone(), self.ids[b].clone(), w * factor))
            .collect();
        Self::build(&vertices, &edges, self.mode)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, x: usize) -> &str {
        &self.ids[x]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn neighbors(&self, x: usize) -> &[(usize, f64)] {
        &self.adjacency[x]
    }

    /// Edges as `(a, b, μ_ab)` with `a`, `b` in input order of first appearance.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn measure(&self, x: usize) -> f64 {
        self.measure[x]
    }

    pub fn measures(&self) -> &[f64] {
        &self.measure
    }

    pub fn mu_min(&self) -> f64 {
        self.mu_min
    }

    pub fn mode(&self) -> MeasureMode {
        self.mode
    }

    /// Weight of the edge `xy`, if present.
    pub fn weight(&self, x: usize, y: usize) -> Option<f64> {
        self.adjacency
            .get(x)?
            .iter()
            .find(|&&(z, _)| z == y)
            .map(|&(_, w)| w)
    }

    /// Number of edges on a shortest path, `None` when unreachable.
    pub fn distance(&self, x: usize, y: usize) -> Result<Option<usize>, GraphError> {
        let n = self.len();
        for v in [x, y] {
            if v >= n {
                return Err(GraphError::UnknownVertex {
                    vertex: alloc::format!("#{v}"),
                });
            }
        }
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        dist[x] = 0;
        queue.push_back(x);
        while let Some(v) = queue.pop_front() {
            if v == y {
                return Ok(Some(dist[v]));
            }
            for &(w, _) in &self.adjacency[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(None)
    }

    /// [`distance`](Self::distance) by vertex id.
    pub fn distance_by_id(&self, x: &str, y: &str) -> Result<Option<usize>, GraphError> {
        let ix = self
            .index_of(x)
            .ok_or_else(|| GraphError::UnknownVertex { vertex: x.into() })?;
        let iy = self
            .index_of(y)
            .ok_or_else(|| GraphError::UnknownVertex { vertex: y.into() })?;
        self.distance(ix, iy)
    }
}

/// Which part of the partition a vertex belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Role {
    Omega,
    Boundary,
    Exterior,
}

/// Interior Ω, its vertex boundary ∂Ω = { y ∉ Ω : y ∼ x for some x ∈ Ω } and
/// the remaining exterior vertices. Index lists are sorted in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainPartition {
    roles: Vec<Role>,
    omega: Vec<usize>,
    boundary: Vec<usize>,
    exterior: Vec<usize>,
    /// Position of each vertex in `omega`, when it is interior.
    slot: Vec<Option<usize>>,
    connected: bool,
}

impl DomainPartition {
    /// Computes ∂Ω and the exterior from the interior set, and records
    /// whether the subgraph induced on Ω ∪ ∂Ω is connected.
    pub fn compute(graph: &WeightedGraph, omega: &[usize]) -> Result<Self, GraphError> {
        if omega.is_empty() {
            return Err(GraphError::EmptyOmega);
        }
        let n = graph.len();
        let mut roles = vec![Role::Exterior; n];
        for &x in omega {
            if x >= n {
                return Err(GraphError::UnknownVertex {
                    vertex: alloc::format!("#{x}"),
                });
            }
            roles[x] = Role::Omega;
        }
        for x in 0..n {
            if roles[x] == Role::Omega {
                for &(y, _) in graph.neighbors(x) {
                    if roles[y] == Role::Exterior {
                        roles[y] = Role::Boundary;
                    }
                }
            }
        }
        Ok(Self::from_role_vec(graph, roles))
    }

    /// [`compute`](Self::compute) with vertex ids.
    pub fn compute_by_ids<S: AsRef<str>>(
        graph: &WeightedGraph,
        omega: &[S],
    ) -> Result<Self, GraphError> {
        let idx = omega
            .iter()
            .map(|id| {
                graph
                    .index_of(id.as_ref())
                    .ok_or_else(|| GraphError::UnknownVertex {
                        vertex: id.as_ref().into(),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::compute(graph, &idx)
    }

    /// Accepts an explicit labelling and checks that its boundary is exactly
    /// the one implied by its interior.
    pub fn from_roles(graph: &WeightedGraph, roles: &[Role]) -> Result<Self, GraphError> {
        if roles.len() != graph.len() {
            return Err(GraphError::UnknownVertex {
                vertex: alloc::format!("#{}", roles.len()),
            });
        }
        let omega: Vec<usize> = (0..roles.len())
            .filter(|&x| roles[x] == Role::Omega)
            .collect();
        let computed = Self::compute(graph, &omega)?;
        if let Some(x) = (0..roles.len()).find(|&x| computed.roles[x] != roles[x]) {
            return Err(GraphError::BoundaryMismatch {
                vertex: graph.id(x).into(),
            });
        }
        Ok(computed)
    }

    fn from_role_vec(graph: &WeightedGraph, roles: Vec<Role>) -> Self {
        let n = roles.len();
        let pick = |r: Role| (0..n).filter(|&x| roles[x] == r).collect::<Vec<_>>();
        let omega = pick(Role::Omega);
        let boundary = pick(Role::Boundary);
        let exterior = pick(Role::Exterior);
        let mut slot = vec![None; n];
        for (k, &x) in omega.iter().enumerate() {
            slot[x] = Some(k);
        }

        // BFS restricted to Ω ∪ ∂Ω.
        let mut seen = vec![false; n];
        let start = omega[0];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &(w, _) in graph.neighbors(v) {
                if !seen[w] && roles[w] != Role::Exterior {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        let connected = reached == omega.len() + boundary.len();

        Self {
            roles,
            omega,
            boundary,
            exterior,
            slot,
            connected,
        }
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn role(&self, x: usize) -> Role {
        self.roles[x]
    }

    pub fn omega(&self) -> &[usize] {
        &self.omega
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn exterior(&self) -> &[usize] {
        &self.exterior
    }

    /// Ω ∪ ∂Ω in input order.
    pub fn closure(&self) -> Vec<usize> {
        (0..self.roles.len())
            .filter(|&x| self.roles[x] != Role::Exterior)
            .collect()
    }

    pub fn is_interior(&self, x: usize) -> bool {
        self.roles[x] == Role::Omega
    }

    /// Index of `x` within [`omega`](Self::omega).
    pub fn interior_slot(&self, x: usize) -> Option<usize> {
        self.slot[x]
    }

    pub fn interior_len(&self) -> usize {
        self.omega.len()
    }

    /// Whether Ω ∪ ∂Ω induces a connected subgraph.
    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// Scatters interior values (ordered like [`omega`](Self::omega)) into a
    /// full vertex function that vanishes off Ω.
    pub fn extend_by_zero(&self, interior: &[f64]) -> GraphFunction {
        debug_assert_eq!(interior.len(), self.omega.len());
        let mut values = vec![0.0; self.roles.len()];
        for (&x, &v) in self.omega.iter().zip(interior) {
            values[x] = v;
        }
        GraphFunction(values)
    }

    /// Gathers the values of `u` on Ω.
    pub fn restrict(&self, u: &GraphFunction) -> Vec<f64> {
        self.omega.iter().map(|&x| u.0[x]).collect()
    }

    /// Copy of `u` with every value off Ω set to zero.
    pub fn zero_extend(&self, u: &GraphFunction) -> GraphFunction {
        let mut values = u.0.clone();
        for (v, r) in values.iter_mut().zip(&self.roles) {
            if *r != Role::Omega {
                *v = 0.0;
            }
        }
        GraphFunction(values)
    }
}

/// A real value per vertex.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GraphFunction(pub Vec<f64>);

impl GraphFunction {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Self(vec![value; n])
    }

    /// The indicator `t·1_{x0}`.
    pub fn spike(n: usize, x0: usize, t: f64) -> Self {
        let mut values = vec![0.0; n];
        values[x0] = t;
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// First vertex off Ω where `self` is nonzero.
    pub fn dirichlet_violation(&self, partition: &DomainPartition) -> Option<usize> {
        (0..self.0.len()).find(|&x| !partition.is_interior(x) && self.0[x] != 0.0)
    }

    pub fn is_dirichlet(&self, partition: &DomainPartition) -> bool {
        self.0.len() == partition.roles().len() && self.dirichlet_violation(partition).is_none()
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }

    /// `a·self + b·other`.
    pub fn axpby(&self, a: f64, other: &Self, b: f64) -> Self {
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }

    pub fn scale(&self, a: f64) -> Self {
        Self(self.0.iter().map(|x| a * x).collect())
    }
}

impl core::ops::Index<usize> for GraphFunction {
    type Output = f64;
    fn index(&self, x: usize) -> &f64 {
        &self.0[x]
    }
}

impl core::ops::IndexMut<usize> for GraphFunction {
    fn index_mut(&mut self, x: usize) -> &mut f64 {
        &mut self.0[x]
    }
}

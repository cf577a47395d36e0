//! Line-oriented graph files.
//!
//! ```text
//! # comment
//! v <id> <measure|auto> <h> <omega|boundary|outside>
//! e <id1> <id2> <weight>
//! ```
//!
//! Vertex lines come first. Either every measure is `auto` (measures are
//! derived from the weights) or every measure is numeric.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use graphpde_core::{
    DomainPartition, EdgeSpec, GraphError, GraphFunction, MeasureMode, Role, VertexSpec,
    WeightedGraph,
};

#[derive(Debug, Clone, PartialEq)]
pub struct GraphFile {
    pub graph: WeightedGraph,
    pub partition: DomainPartition,
    /// Potential h as written, including the ignored off-Ω entries.
    pub h: GraphFunction,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseError {
    Line { line: usize, message: String },
    Graph(GraphError),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Line { line, message } => write!(f, "line {line}: {message}"),
            Self::Graph(e) => write!(f, "invalid graph: {e}"),
        }
    }
}

impl std::error::Error for ParseError {}

fn at(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Line {
        line,
        message: message.into(),
    }
}

fn real(token: &str, line: usize, what: &str) -> Result<f64, ParseError> {
    match token.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(at(
            line,
            format!("{what} '{token}' is not a finite real number"),
        )),
    }
}

pub fn parse(text: &str) -> Result<GraphFile, ParseError> {
    let mut vertices: Vec<VertexSpec> = Vec::new();
    let mut roles = Vec::new();
    let mut h = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<EdgeSpec> = Vec::new();
    let mut seen_edges: BTreeMap<(usize, usize), (f64, usize)> = BTreeMap::new();
    let mut mode: Option<MeasureMode> = None;
    let mut in_edges = false;

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens[0] {
            "v" => {
                if in_edges {
                    return Err(at(line, "vertex line after the first edge line"));
                }
                let [_, id, measure, hv, role] = tokens[..] else {
                    return Err(at(
                        line,
                        "expected 'v <id> <measure|auto> <h> <omega|boundary|outside>'",
                    ));
                };
                if index.contains_key(id) {
                    return Err(at(line, format!("duplicate vertex '{id}'")));
                }
                let this_mode = if measure == "auto" {
                    MeasureMode::Derived
                } else {
                    MeasureMode::Given
                };
                match mode {
                    None => mode = Some(this_mode),
                    Some(m) if m != this_mode => {
                        return Err(at(line, "mixes 'auto' and numeric measures"));
                    }
                    _ => {}
                }
                let spec = if this_mode == MeasureMode::Derived {
                    VertexSpec::auto(id)
                } else {
                    let mu = real(measure, line, "measure")?;
                    if mu <= 0.0 {
                        return Err(at(line, format!("nonpositive measure {mu} for '{id}'")));
                    }
                    VertexSpec::with_measure(id, mu)
                };
                h.push(real(hv, line, "h value")?);
                roles.push(match role {
                    "omega" => Role::Omega,
                    "boundary" => Role::Boundary,
                    "outside" => Role::Exterior,
                    other => {
                        return Err(at(
                            line,
                            format!("unknown role '{other}' (omega|boundary|outside)"),
                        ))
                    }
                });
                index.insert(id.to_string(), vertices.len());
                vertices.push(spec);
            }
            "e" => {
                in_edges = true;
                let [_, a, b, w] = tokens[..] else {
                    return Err(at(line, "expected 'e <id1> <id2> <weight>'"));
                };
                let w = real(w, line, "weight")?;
                if w <= 0.0 {
                    return Err(at(line, format!("nonpositive weight {w}")));
                }
                let ia = *index
                    .get(a)
                    .ok_or_else(|| at(line, format!("unknown vertex '{a}'")))?;
                let ib = *index
                    .get(b)
                    .ok_or_else(|| at(line, format!("unknown vertex '{b}'")))?;
                if ia == ib {
                    return Err(at(line, format!("self-loop at '{a}'")));
                }
                let key = (ia.min(ib), ia.max(ib));
                if let Some(&(prev, prev_line)) = seen_edges.get(&key) {
                    if prev != w {
                        return Err(at(
                            line,
                            format!(
                                "edge {a}-{b} repeats line {prev_line} with a different weight"
                            ),
                        ));
                    }
                    continue;
                }
                seen_edges.insert(key, (w, line));
                edges.push(EdgeSpec::new(a, b, w));
            }
            other => {
                return Err(at(
                    line,
                    format!("unknown record '{other}' (expected 'v' or 'e')"),
                ))
            }
        }
    }

    let mode = mode.ok_or(ParseError::Graph(GraphError::EmptyGraph))?;
    let graph = WeightedGraph::build(&vertices, &edges, mode).map_err(ParseError::Graph)?;
    let partition = DomainPartition::from_roles(&graph, &roles).map_err(ParseError::Graph)?;
    Ok(GraphFile {
        graph,
        partition,
        h: GraphFunction(h),
    })
}

/// Writes a file that [`parse`] maps back to the same graph, partition and h.
pub fn write(graph: &WeightedGraph, partition: &DomainPartition, h: &GraphFunction) -> String {
    let mut out = String::new();
    for x in 0..graph.len() {
        let measure = match graph.mode() {
            MeasureMode::Derived => "auto".to_string(),
            MeasureMode::Given => format!("{:?}", graph.measure(x)),
        };
        let role = match partition.role(x) {
            Role::Omega => "omega",
            Role::Boundary => "boundary",
            Role::Exterior => "outside",
        };
        let _ = writeln!(out, "v {} {measure} {:?} {role}", graph.id(x), h[x]);
    }
    for &(a, b, w) in graph.edges() {
        let _ = writeln!(out, "e {} {} {:?}", graph.id(a), graph.id(b), w);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const PATH3: &str =
        "# path\nv a auto 1 boundary\nv b auto 1 omega\nv c auto 1 boundary\ne a b 1\ne b c 1\n";

    #[test]
    fn parses_path() {
        let gf = parse(PATH3).unwrap();
        assert_eq!(gf.graph.measures(), &[1.0, 2.0, 1.0]);
        assert_eq!(gf.partition.omega(), &[1]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("v a auto 1 omega\nv b 2 1 boundary\n", 2, "mixes"),
            ("v a auto 1 omega\ne a b 1\n", 2, "unknown vertex"),
            (
                "v a auto 1 omega\nv b auto 1 boundary\ne a b -1\n",
                3,
                "nonpositive weight",
            ),
            (
                "v a auto 1 omega\nv b auto 1 boundary\ne a b 1\nv c auto 1 outside\n",
                4,
                "after",
            ),
            ("v a auto x omega\n", 1, "h value"),
            ("w a\n", 1, "unknown record"),
            (
                "v a auto 1 omega\nv b auto 1 boundary\ne a b 1\ne b a 2\n",
                4,
                "different weight",
            ),
        ];
        for (text, line, needle) in cases {
            match parse(text) {
                Err(ParseError::Line { line: l, message }) => {
                    assert_eq!(l, line, "{text}");
                    assert!(message.contains(needle), "{message}");
                }
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn mislabeled_boundary_rejected() {
        let text = "v a auto 1 outside\nv b auto 1 omega\nv c auto 1 boundary\ne a b 1\ne b c 1\n";
        assert!(matches!(parse(text), Err(ParseError::Graph(_))));
    }

    #[test]
    fn round_trip() {
        let gf = parse(PATH3).unwrap();
        let again = parse(&write(&gf.graph, &gf.partition, &gf.h)).unwrap();
        assert_eq!(gf, again);
        let given = "v a 0.3 2.5 omega\nv b 1.7 0.1 boundary\ne a b 0.1\n";
        let gf = parse(given).unwrap();
        assert_eq!(parse(&write(&gf.graph, &gf.partition, &gf.h)).unwrap(), gf);
    }
}

//! Solution files: one `u <id> <value>` line per vertex in input order,
//! values with 17 significant digits. Several functions are separated by
//! `#` header lines.

use std::collections::HashMap;
use std::fmt::Write as _;

use graphpde_core::{GraphFunction, WeightedGraph};

use crate::report::sig17;

pub fn write(graph: &WeightedGraph, blocks: &[(String, &GraphFunction)]) -> String {
    let mut out = String::new();
    for (header, u) in blocks {
        if blocks.len() > 1 {
            let _ = writeln!(out, "# {header}");
        }
        for x in 0..graph.len() {
            let _ = writeln!(out, "u {} {}", graph.id(x), sig17(u[x]));
        }
    }
    out
}

/// Reads the blocks back as values in graph vertex order.
pub fn read(graph: &WeightedGraph, text: &str) -> Result<Vec<GraphFunction>, String> {
    let index: HashMap<&str, usize> = graph
        .ids()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let mut blocks: Vec<(GraphFunction, Vec<bool>)> = Vec::new();
    let mut fresh = true;
    for (k, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if t.starts_with('#') {
            fresh = true;
            continue;
        }
        let [tag, id, value] = t.split_whitespace().collect::<Vec<_>>()[..] else {
            return Err(format!("line {}: expected 'u <id> <value>'", k + 1));
        };
        if tag != "u" {
            return Err(format!("line {}: expected 'u <id> <value>'", k + 1));
        }
        let x = *index
            .get(id)
            .ok_or_else(|| format!("line {}: unknown vertex '{id}'", k + 1))?;
        let v: f64 = value
            .parse()
            .map_err(|_| format!("line {}: bad value '{value}'", k + 1))?;
        if fresh || blocks.last().is_some_and(|b| b.1[x]) {
            blocks.push((GraphFunction::zeros(graph.len()), vec![false; graph.len()]));
            fresh = false;
        }
        let b = blocks.last_mut().expect("block pushed above");
        b.0[x] = v;
        b.1[x] = true;
    }
    Ok(blocks.into_iter().map(|b| b.0).collect())
}

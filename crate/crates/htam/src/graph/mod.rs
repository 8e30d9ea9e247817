//! Tool-dependency DAG: validation, layer stratification, path enumeration,
//! and the centrality-derived cost tables used by the structural metric.

mod catalog;
mod centrality;
mod cost;

pub use catalog::{ToolCatalog, ToolParam, ToolSpec};
pub use centrality::{
    out_degree_centrality, pagerank_centrality, CentralityScores, PageRankOptions,
};
pub use cost::{build_cost_model, CostModel};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("graph contains a cycle: {0}")]
    CyclicGraph(String),
    #[error("graph failed validation: {0}")]
    InvalidGraph(String),
    #[error("node {0} has no layer assignment")]
    MissingNode(String),
    #[error("merge map is not monotone: fine layer {fine_a} -> {coarse_a} but fine layer {fine_b} -> {coarse_b}")]
    NonMonotoneMerge {
        fine_a: usize,
        coarse_a: usize,
        fine_b: usize,
        coarse_b: usize,
    },
    #[error("malformed merge map: {0}")]
    MalformedMerge(String),
    #[error("base cost must be positive, got {0}")]
    NegativeBase(f64),
    #[error("invalid tool catalog: {0}")]
    InvalidCatalog(String),
}

/// A directed graph over tool names. Edges are prerequisite constraints:
/// `(u, v)` means u must complete before v.
///
/// Construction is unchecked; [`validate_dag`] reports violations of the
/// DAG invariants (acyclicity, no self-loops, no dangling endpoints).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DependencyGraph {
    pub domain: Option<String>,
    pub description: Option<String>,
    nodes: BTreeSet<String>,
    edges: BTreeSet<(String, String)>,
}

/// On-disk schema: `{domain, nodes, edges, description}` with edges as
/// two-element arrays.
#[derive(Serialize, Deserialize)]
struct GraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domain: Option<String>,
    nodes: Vec<String>,
    edges: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    description: Option<String>,
}

impl Serialize for DependencyGraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GraphFile {
            domain: self.domain.clone(),
            nodes: self.nodes.iter().cloned().collect(),
            edges: self.edges.iter().cloned().collect(),
            description: self.description.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DependencyGraph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let file = GraphFile::deserialize(deserializer)?;
        let mut graph = DependencyGraph::new(file.nodes, file.edges);
        graph.domain = file.domain;
        graph.description = file.description;
        Ok(graph)
    }
}

impl DependencyGraph {
    pub fn new<N, E>(nodes: N, edges: E) -> Self
    where
        N: IntoIterator,
        N::Item: Into<String>,
        E: IntoIterator<Item = (String, String)>,
    {
        Self {
            domain: None,
            description: None,
            nodes: nodes.into_iter().map(Into::into).collect(),
            edges: edges.into_iter().collect(),
        }
    }

    /// Convenience constructor from `&str` pairs, used heavily in tests.
    pub fn from_edges<'a, N, E>(nodes: N, edges: E) -> Self
    where
        N: IntoIterator<Item = &'a str>,
        E: IntoIterator<Item = (&'a str, &'a str)>,
    {
        Self::new(
            nodes,
            edges
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string())),
        )
    }

    pub fn from_json(json: &str) -> Result<Self, GraphError> {
        serde_json::from_str(json)
            .map_err(|e| GraphError::InvalidGraph(format!("parse error: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, GraphError> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| GraphError::InvalidGraph(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json(&text)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(String::as_str)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_node(&self, name: &str) -> bool {
        self.nodes.contains(name)
    }

    pub fn contains_edge(&self, from: &str, to: &str) -> bool {
        self.edges.contains(&(from.to_string(), to.to_string()))
    }

    /// Successors of `node` in deterministic (lexicographic) order.
    pub fn successors(&self, node: &str) -> Vec<&str> {
        self.edges
            .iter()
            .filter(|(a, _)| a == node)
            .map(|(_, b)| b.as_str())
            .collect()
    }

    /// Predecessors of `node` in deterministic (lexicographic) order.
    pub fn predecessors(&self, node: &str) -> Vec<&str> {
        let mut preds: Vec<&str> = self
            .edges
            .iter()
            .filter(|(_, b)| b == node)
            .map(|(a, _)| a.as_str())
            .collect();
        preds.sort_unstable();
        preds
    }

    pub fn out_degree(&self, node: &str) -> usize {
        self.edges.iter().filter(|(a, _)| a == node).count()
    }

    pub fn in_degree(&self, node: &str) -> usize {
        self.edges.iter().filter(|(_, b)| b == node).count()
    }

    /// Nodes with in-degree 0, sorted.
    pub fn sources(&self) -> Vec<&str> {
        self.nodes
            .iter()
            .filter(|n| self.in_degree(n) == 0)
            .map(String::as_str)
            .collect()
    }

    /// Nodes with out-degree 0, sorted.
    pub fn sinks(&self) -> Vec<&str> {
        self.nodes
            .iter()
            .filter(|n| self.out_degree(n) == 0)
            .map(String::as_str)
            .collect()
    }

    /// Topological order (sorted by name within each in-degree wave), or an
    /// error naming a witness cycle.
    pub fn topological_order(&self) -> Result<Vec<String>, GraphError> {
        let mut in_deg: BTreeMap<&str, usize> =
            self.nodes.iter().map(|n| (n.as_str(), 0)).collect();
        for (a, b) in &self.edges {
            if let Some(d) = in_deg.get_mut(b.as_str()) {
                *d += 1;
            }
            // Dangling sources still contribute order constraints only if
            // both endpoints are real nodes; others are reported by
            // validate_dag.
            let _ = a;
        }
        let mut ready: BTreeSet<&str> = in_deg
            .iter()
            .filter(|(_, d)| **d == 0)
            .map(|(n, _)| *n)
            .collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(&next) = ready.iter().next() {
            ready.remove(next);
            order.push(next.to_string());
            for (a, b) in &self.edges {
                if a == next && self.nodes.contains(b) {
                    let d = in_deg.get_mut(b.as_str()).expect("endpoint tracked");
                    *d -= 1;
                    if *d == 0 {
                        ready.insert(b.as_str());
                    }
                }
            }
        }
        if order.len() != self.nodes.len() {
            let witness = find_cycle(self).unwrap_or_default();
            return Err(GraphError::CyclicGraph(witness.join(",")));
        }
        Ok(order)
    }
}

/// Categories of DAG-invariant violations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// A witness cycle, listed with its starting node repeated at the end.
    Cycle {
        nodes: Vec<String>,
    },
    /// An edge endpoint that is not a declared node.
    DanglingEndpoint {
        node: String,
    },
    SelfLoop {
        node: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Cycle { nodes } => write!(f, "cycle: {}", nodes.join(",")),
            Violation::DanglingEndpoint { node } => write!(f, "dangling endpoint {node}"),
            Violation::SelfLoop { node } => write!(f, "self-loop on {node}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_cycle(&self) -> bool {
        self.violations
            .iter()
            .any(|v| matches!(v, Violation::Cycle { .. } | Violation::SelfLoop { .. }))
    }
}

/// Checks the DAG invariants and reports every violation found. An empty
/// report means the graph is valid.
pub fn validate_dag(graph: &DependencyGraph) -> ValidationReport {
    let mut violations = Vec::new();
    for (a, b) in graph.edges() {
        if a == b {
            violations.push(Violation::SelfLoop {
                node: a.to_string(),
            });
        }
        for endpoint in [a, b] {
            if !graph.contains_node(endpoint) {
                let v = Violation::DanglingEndpoint {
                    node: endpoint.to_string(),
                };
                if !violations.contains(&v) {
                    violations.push(v);
                }
            }
        }
    }
    if let Some(cycle) = find_cycle(graph) {
        violations.push(Violation::Cycle { nodes: cycle });
    }
    ValidationReport { violations }
}

/// One witness cycle via iterative DFS over declared nodes, self-loops
/// excluded (reported separately). Returns the cycle with its first node
/// repeated at the end, e.g. `[a, b, a]`.
fn find_cycle(graph: &DependencyGraph) -> Option<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum State {
        Unseen,
        Active,
        Done,
    }
    let mut state: BTreeMap<&str, State> = graph.nodes().map(|n| (n, State::Unseen)).collect();

    for start in graph.nodes() {
        if state[start] != State::Unseen {
            continue;
        }
        // Stack of (node, successor iterator index); path mirrors the stack.
        let mut stack: Vec<(&str, Vec<&str>, usize)> = vec![(start, graph.successors(start), 0)];
        state.insert(start, State::Active);
        let mut path: Vec<&str> = vec![start];
        while let Some((node, succs, idx)) = stack.last_mut() {
            if let Some(&next) = succs.get(*idx) {
                *idx += 1;
                if next == *node || !graph.contains_node(next) {
                    continue;
                }
                match state[next] {
                    State::Unseen => {
                        state.insert(next, State::Active);
                        path.push(next);
                        stack.push((next, graph.successors(next), 0));
                    }
                    State::Active => {
                        let pos = path.iter().position(|n| *n == next).expect("on path");
                        let mut cycle: Vec<String> =
                            path[pos..].iter().map(|s| s.to_string()).collect();
                        cycle.push(next.to_string());
                        return Some(cycle);
                    }
                    State::Done => {}
                }
            } else {
                state.insert(node, State::Done);
                path.pop();
                stack.pop();
            }
        }
    }
    None
}

/// A partition of the graph's nodes into ordered layers, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerAssignment {
    pub layer_of: BTreeMap<String, usize>,
    pub layer_count: usize,
}

impl LayerAssignment {
    pub fn layer(&self, node: &str) -> Option<usize> {
        self.layer_of.get(node).copied()
    }

    /// Nodes of one layer, sorted.
    pub fn members(&self, layer: usize) -> Vec<&str> {
        self.layer_of
            .iter()
            .filter(|(_, l)| **l == layer)
            .map(|(n, _)| n.as_str())
            .collect()
    }
}

/// Longest-path layering: each node sits one layer above its deepest
/// predecessor, sources at layer 1. Every edge strictly increases the layer,
/// and the layer count equals the longest path length plus one.
pub fn stratify_longest_path(graph: &DependencyGraph) -> Result<LayerAssignment, GraphError> {
    let report = validate_dag(graph);
    if !report.is_valid() {
        let summary = report
            .violations
            .iter()
            .map(Violation::to_string)
            .collect::<Vec<_>>()
            .join("; ");
        if report.has_cycle() {
            return Err(GraphError::CyclicGraph(summary));
        }
        return Err(GraphError::InvalidGraph(summary));
    }
    let order = graph.topological_order()?;
    let mut layer_of = BTreeMap::new();
    let mut layer_count = 0;
    for node in order {
        let depth = graph
            .predecessors(&node)
            .iter()
            .map(|p| layer_of.get(*p).copied().unwrap_or(0))
            .max()
            .unwrap_or(0)
            + 1;
        layer_count = layer_count.max(depth);
        layer_of.insert(node, depth);
    }
    Ok(LayerAssignment {
        layer_of,
        layer_count,
    })
}

/// Relabels fine layers into coarser ones through `merge_map`, which must be
/// monotone nondecreasing over 1..=L and surjective onto 1..=L'. Intra-layer
/// edges become legal after coarsening.
pub fn coarsen_layers(
    assignment: &LayerAssignment,
    merge_map: &BTreeMap<usize, usize>,
) -> Result<LayerAssignment, GraphError> {
    let fine_count = assignment.layer_count;
    for fine in 1..=fine_count {
        if !merge_map.contains_key(&fine) {
            return Err(GraphError::MalformedMerge(format!(
                "fine layer {fine} is unmapped"
            )));
        }
    }
    for fine in 1..fine_count {
        let (a, b) = (merge_map[&fine], merge_map[&(fine + 1)]);
        if a > b {
            return Err(GraphError::NonMonotoneMerge {
                fine_a: fine,
                coarse_a: a,
                fine_b: fine + 1,
                coarse_b: b,
            });
        }
    }
    let coarse_count = merge_map.values().copied().max().unwrap_or(0);
    let covered: BTreeSet<usize> = merge_map.values().copied().collect();
    for coarse in 1..=coarse_count {
        if !covered.contains(&coarse) {
            return Err(GraphError::MalformedMerge(format!(
                "coarse layer {coarse} is empty"
            )));
        }
    }
    if covered.iter().any(|c| *c == 0) {
        return Err(GraphError::MalformedMerge(
            "coarse layers are 1-based".into(),
        ));
    }
    let layer_of = assignment
        .layer_of
        .iter()
        .map(|(node, fine)| (node.clone(), merge_map[fine]))
        .collect();
    Ok(LayerAssignment {
        layer_of,
        layer_count: coarse_count,
    })
}

/// Returns exactly the edges whose source layer exceeds its target layer.
/// An empty result certifies the assignment as a valid stratification.
pub fn check_stratification(
    graph: &DependencyGraph,
    assignment: &LayerAssignment,
) -> Result<Vec<(String, String)>, GraphError> {
    for node in graph.nodes() {
        if assignment.layer(node).is_none() {
            return Err(GraphError::MissingNode(node.to_string()));
        }
    }
    Ok(graph
        .edges()
        .filter(|(a, b)| {
            graph.contains_node(a)
                && graph.contains_node(b)
                && assignment.layer(a) > assignment.layer(b)
        })
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect())
}

/// An ordered tool sequence; when extracted from a graph, consecutive tools
/// are connected by an edge.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ToolPath {
    pub tools: Vec<String>,
}

impl ToolPath {
    pub fn new<I>(tools: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<String>,
    {
        Self {
            tools: tools.into_iter().map(Into::into).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.tools.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tools.is_empty()
    }

    /// True when non-empty and every consecutive pair is an edge of `graph`.
    pub fn is_path_of(&self, graph: &DependencyGraph) -> bool {
        !self.tools.is_empty()
            && self.tools.iter().all(|t| graph.contains_node(t))
            && self
                .tools
                .windows(2)
                .all(|w| graph.contains_edge(&w[0], &w[1]))
    }
}

/// Enumerates simple source-to-sink paths in deterministic lexicographic
/// depth-first order, truncated at `max_paths`; paths longer than `max_len`
/// nodes are pruned.
pub fn enumerate_paths(graph: &DependencyGraph, max_paths: usize, max_len: usize) -> Vec<ToolPath> {
    let mut paths = Vec::new();
    if max_paths == 0 || max_len == 0 {
        return paths;
    }
    let mut current: Vec<String> = Vec::new();
    for source in graph.sources() {
        if paths.len() >= max_paths {
            break;
        }
        walk(graph, source, &mut current, &mut paths, max_paths, max_len);
    }
    paths
}

fn walk(
    graph: &DependencyGraph,
    node: &str,
    current: &mut Vec<String>,
    paths: &mut Vec<ToolPath>,
    max_paths: usize,
    max_len: usize,
) {
    if paths.len() >= max_paths || current.len() >= max_len {
        return;
    }
    current.push(node.to_string());
    let succs: Vec<&str> = graph
        .successors(node)
        .into_iter()
        .filter(|s| graph.contains_node(s) && !current.iter().any(|n| n == s))
        .collect();
    if succs.is_empty() && graph.out_degree(node) == 0 {
        paths.push(ToolPath::new(current.clone()));
    } else {
        for succ in succs {
            if paths.len() >= max_paths {
                break;
            }
            walk(graph, succ, current, paths, max_paths, max_len);
        }
    }
    current.pop();
}

//! Graph centrality scores that quantify a tool's importance: normalized
//! out-degree for direct influence, PageRank for transitive influence.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::DependencyGraph;

/// Normalized out-degree: `outdeg(v) / max outdeg`. All zeros when no node
/// has outgoing edges.
pub fn out_degree_centrality(graph: &DependencyGraph) -> BTreeMap<String, f64> {
    let degrees: BTreeMap<String, usize> = graph
        .nodes()
        .map(|n| (n.to_string(), graph.out_degree(n)))
        .collect();
    let max = degrees.values().copied().max().unwrap_or(0);
    degrees
        .into_iter()
        .map(|(n, d)| {
            let score = if max == 0 { 0.0 } else { d as f64 / max as f64 };
            (n, score)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct PageRankOptions {
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// Optional per-edge weights; unweighted by default. Missing edges
    /// default to weight 1.
    pub edge_weights: Option<BTreeMap<(String, String), f64>>,
}

impl Default for PageRankOptions {
    fn default() -> Self {
        Self {
            damping: 0.85,
            tol: 1e-10,
            max_iter: 200,
            edge_weights: None,
        }
    }
}

/// Power-iteration PageRank over the graph as given: a tool is important if
/// important tools link to it. Dangling-node mass is redistributed uniformly
/// over all nodes, so the scores always sum to 1. Returns the scores and the
/// number of iterations used; hitting `max_iter` signals non-convergence but
/// is never an error.
pub fn pagerank_centrality(
    graph: &DependencyGraph,
    opts: &PageRankOptions,
) -> (BTreeMap<String, f64>, usize) {
    let nodes: Vec<&str> = graph.nodes().collect();
    let n = nodes.len();
    if n == 0 {
        return (BTreeMap::new(), 0);
    }
    let index: BTreeMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();

    // Out-edges with weights, keyed by source index.
    let mut out: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (a, b) in graph.edges() {
        let (Some(&ia), Some(&ib)) = (index.get(a), index.get(b)) else {
            continue;
        };
        let w = opts
            .edge_weights
            .as_ref()
            .and_then(|m| m.get(&(a.to_string(), b.to_string())).copied())
            .unwrap_or(1.0);
        out[ia].push((ib, w));
    }
    let out_weight: Vec<f64> = out
        .iter()
        .map(|edges| edges.iter().map(|(_, w)| w).sum())
        .collect();

    let d = opts.damping;
    let uniform = 1.0 / n as f64;
    let mut rank = vec![uniform; n];
    let mut iterations = 0;
    for iter in 1..=opts.max_iter {
        iterations = iter;
        let dangling: f64 = (0..n)
            .filter(|&i| out_weight[i] == 0.0)
            .map(|i| rank[i])
            .sum();
        let mut next = vec![(1.0 - d) * uniform + d * dangling * uniform; n];
        for i in 0..n {
            if out_weight[i] == 0.0 {
                continue;
            }
            let share = d * rank[i] / out_weight[i];
            for &(j, w) in &out[i] {
                next[j] += share * w;
            }
        }
        let delta: f64 = rank
            .iter()
            .zip(next.iter())
            .map(|(a, b)| (a - b).abs())
            .sum();
        rank = next;
        if delta < opts.tol {
            break;
        }
    }

    let scores = nodes
        .iter()
        .map(|node| (node.to_string(), rank[index[node]]))
        .collect();
    (scores, iterations)
}

/// Both centralities plus the parameters that produced them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CentralityScores {
    pub odc: BTreeMap<String, f64>,
    pub prc: BTreeMap<String, f64>,
    pub damping: f64,
    pub iterations_used: usize,
}

impl CentralityScores {
    pub fn compute(graph: &DependencyGraph, opts: &PageRankOptions) -> Self {
        let odc = out_degree_centrality(graph);
        let (prc, iterations_used) = pagerank_centrality(graph, opts);
        Self {
            odc,
            prc,
            damping: opts.damping,
            iterations_used,
        }
    }

    pub fn odc_of(&self, tool: &str) -> f64 {
        self.odc.get(tool).copied().unwrap_or(0.0)
    }

    pub fn prc_of(&self, tool: &str) -> f64 {
        self.prc.get(tool).copied().unwrap_or(0.0)
    }
}

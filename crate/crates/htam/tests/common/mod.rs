//! Independent oracles and generators shared by the integration tests.
//! Everything here recomputes expected values by brute force, never through
//! the implementation paths under test.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use htam::graph::{CostModel, DependencyGraph};
use htam::metrics::SimilarityProvider;

/// Exhaustive minimum over every edit script (delete / insert / align at
/// each position), plain recursion with no memoization.
pub fn brute_force_edit_distance(
    agent: &[String],
    gt: &[String],
    cost: &CostModel,
    sim: &dyn SimilarityProvider,
) -> f64 {
    fn recurse(
        agent: &[String],
        gt: &[String],
        i: usize,
        j: usize,
        cost: &CostModel,
        sim: &dyn SimilarityProvider,
    ) -> f64 {
        if i == agent.len() && j == gt.len() {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        if i < agent.len() {
            best = best.min(recurse(agent, gt, i + 1, j, cost, sim) + cost.ins_del(&agent[i]));
        }
        if j < gt.len() {
            best = best.min(recurse(agent, gt, i, j + 1, cost, sim) + cost.ins_del(&gt[j]));
        }
        if i < agent.len() && j < gt.len() {
            let step = if agent[i] == gt[j] {
                0.0
            } else {
                1.0 - sim.similarity(&agent[i], &gt[j])
            };
            best = best.min(recurse(agent, gt, i + 1, j + 1, cost, sim) + step);
        }
        best
    }
    recurse(agent, gt, 0, 0, cost, sim)
}

/// Classical unit-cost Levenshtein distance.
#[allow(clippy::needless_range_loop)]
pub fn classical_levenshtein(a: &[String], b: &[String]) -> usize {
    let (m, n) = (a.len(), b.len());
    let mut dist = vec![vec![0usize; n + 1]; m + 1];
    for i in 0..=m {
        dist[i][0] = i;
    }
    for j in 0..=n {
        dist[0][j] = j;
    }
    for i in 1..=m {
        for j in 1..=n {
            let sub = if a[i - 1] == b[j - 1] { 0 } else { 1 };
            dist[i][j] = (dist[i - 1][j] + 1)
                .min(dist[i][j - 1] + 1)
                .min(dist[i - 1][j - 1] + sub);
        }
    }
    dist[m][n]
}

/// Random symmetric tool-pair similarity table.
pub struct RandomSimilarity {
    table: BTreeMap<(String, String), f64>,
}

impl RandomSimilarity {
    pub fn new(tools: &[String], rng: &mut ChaCha8Rng) -> Self {
        let mut table = BTreeMap::new();
        for (i, a) in tools.iter().enumerate() {
            for b in tools.iter().skip(i + 1) {
                table.insert((a.clone(), b.clone()), rng.random_range(0.0..1.0));
            }
        }
        Self { table }
    }
}

impl SimilarityProvider for RandomSimilarity {
    fn similarity(&self, tool_a: &str, tool_b: &str) -> f64 {
        if tool_a == tool_b {
            return 1.0;
        }
        let key = if tool_a <= tool_b {
            (tool_a.to_string(), tool_b.to_string())
        } else {
            (tool_b.to_string(), tool_a.to_string())
        };
        self.table.get(&key).copied().unwrap_or(0.0)
    }
}

/// A cost model with arbitrary per-tool ins/del costs (not derived from
/// centralities), to stress the edit-distance oracle across uneven spreads.
pub fn random_cost_model(tools: &[String], rng: &mut ChaCha8Rng) -> CostModel {
    let mut model = CostModel::uniform(1.0).expect("positive base");
    model.uniform_mode = false;
    for tool in tools {
        model
            .ins_del_cost
            .insert(tool.clone(), rng.random_range(0.5..3.0));
    }
    model
}

/// Random DAG over `n` nodes: edges only from lower to higher indices of a
/// random permutation, so acyclicity holds by construction.
pub fn random_dag(n: usize, edge_prob: f64, rng: &mut ChaCha8Rng) -> DependencyGraph {
    let names: Vec<String> = (0..n).map(|i| format!("t{i:02}")).collect();
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        order.swap(i, j);
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_range(0.0..1.0) < edge_prob {
                edges.push((names[order[i]].clone(), names[order[j]].clone()));
            }
        }
    }
    DependencyGraph::new(names, edges)
}

/// Longest path (in edges) ending at each node, by direct recursive search
/// over predecessors.
pub fn longest_path_depths(graph: &DependencyGraph) -> BTreeMap<String, usize> {
    fn depth(graph: &DependencyGraph, node: &str) -> usize {
        graph
            .predecessors(node)
            .iter()
            .map(|p| depth(graph, p) + 1)
            .max()
            .unwrap_or(0)
    }
    graph
        .nodes()
        .map(|n| (n.to_string(), depth(graph, n)))
        .collect()
}

/// All source-to-sink simple paths by plain recursion, sorted
/// lexicographically.
pub fn all_paths_recursive(graph: &DependencyGraph) -> Vec<Vec<String>> {
    fn extend(
        graph: &DependencyGraph,
        node: &str,
        prefix: &mut Vec<String>,
        out: &mut Vec<Vec<String>>,
    ) {
        prefix.push(node.to_string());
        if graph.out_degree(node) == 0 {
            out.push(prefix.clone());
        } else {
            for succ in graph.successors(node) {
                if !prefix.iter().any(|n| n == succ) {
                    extend(graph, succ, prefix, out);
                }
            }
        }
        prefix.pop();
    }
    let mut out = Vec::new();
    for source in graph.sources() {
        extend(graph, source, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

/// Dense PageRank oracle: solves `(I − d·M) π = (1−d)/n · 1` by Gaussian
/// elimination, where M is the column-stochastic transition matrix with
/// dangling columns spread uniformly.
#[allow(clippy::needless_range_loop)]
pub fn dense_pagerank(graph: &DependencyGraph, damping: f64) -> BTreeMap<String, f64> {
    let nodes: Vec<&str> = graph.nodes().collect();
    let n = nodes.len();
    if n == 0 {
        return BTreeMap::new();
    }
    let index: BTreeMap<&str, usize> = nodes.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    // M[row][col] = probability of moving col -> row.
    let mut transition = vec![vec![0.0f64; n]; n];
    for &node in &nodes {
        let col = index[node];
        let succs: Vec<&str> = graph
            .successors(node)
            .into_iter()
            .filter(|s| graph.contains_node(s))
            .collect();
        if succs.is_empty() {
            for row in 0..n {
                transition[row][col] = 1.0 / n as f64;
            }
        } else {
            let share = 1.0 / succs.len() as f64;
            for succ in succs {
                transition[index[succ]][col] += share;
            }
        }
    }
    // A = I − d·M, b = (1−d)/n.
    let mut a = vec![vec![0.0f64; n]; n];
    let mut b = vec![(1.0 - damping) / n as f64; n];
    for row in 0..n {
        for col in 0..n {
            a[row][col] = if row == col { 1.0 } else { 0.0 } - damping * transition[row][col];
        }
    }
    // Gaussian elimination with partial pivoting.
    for pivot in 0..n {
        let best = (pivot..n)
            .max_by(|&x, &y| a[x][pivot].abs().partial_cmp(&a[y][pivot].abs()).unwrap())
            .unwrap();
        a.swap(pivot, best);
        b.swap(pivot, best);
        let scale = a[pivot][pivot];
        assert!(scale.abs() > 1e-14, "singular system");
        for row in (pivot + 1)..n {
            let factor = a[row][pivot] / scale;
            for col in pivot..n {
                a[row][col] -= factor * a[pivot][col];
            }
            b[row] -= factor * b[pivot];
        }
    }
    let mut x = vec![0.0f64; n];
    for row in (0..n).rev() {
        let mut sum = b[row];
        for col in (row + 1)..n {
            sum -= a[row][col] * x[col];
        }
        x[row] = sum / a[row][row];
    }
    nodes
        .iter()
        .map(|node| (node.to_string(), x[index[node]]))
        .collect()
}

/// Enumerates every DAG on `n` labeled nodes (presence/absence of each
/// upper-triangular edge under every topological labeling is covered by
/// iterating edge subsets of the complete order and all permutations being
/// implicit in labels). Practical for n <= 4.
pub fn enumerate_small_dags(n: usize) -> Vec<DependencyGraph> {
    let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                pairs.push((i, j));
            }
        }
    }
    let mut out = Vec::new();
    let total = 1usize << pairs.len();
    for mask in 0..total {
        let edges: Vec<(String, String)> = pairs
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask & (1 << bit) != 0)
            .map(|(_, (i, j))| (names[*i].clone(), names[*j].clone()))
            .collect();
        let graph = DependencyGraph::new(names.clone(), edges);
        if htam::graph::validate_dag(&graph).is_valid() {
            out.push(graph);
        }
    }
    out
}

/// Seeded RNG helper so every test names its stream.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random tool sequence over an alphabet.
pub fn random_sequence(alphabet: &[String], max_len: usize, rng: &mut ChaCha8Rng) -> Vec<String> {
    let len = rng.random_range(0..=max_len);
    (0..len)
        .map(|_| alphabet[rng.random_range(0..alphabet.len())].clone())
        .collect()
}

/// All sequences over `alphabet` with length 0..=max_len.
pub fn all_sequences(alphabet: &[String], max_len: usize) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<String>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for seq in &frontier {
            for tool in alphabet {
                let mut extended = seq.clone();
                extended.push(tool.clone());
                next.push(extended);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Unique elements of a sequence as a set.
pub fn tool_set(seq: &[String]) -> BTreeSet<String> {
    seq.iter().cloned().collect()
}

use htam::backend::ScriptedBackend;

pub const COASTAL_QUERY: &str =
    "Quantify the statistically significant trend of coastal erosion along the shoreline between latitudes 34N and 35N for the year 2023.";
pub const CROP_QUERY: &str = "How healthy are the crops across the valley this season?";

/// Scripted selections for the bundled three-layer registry. Matchers pair
/// a prompt-stage marker with a fragment unique to one query, so tool and
/// agent descriptions embedded in the prompts cannot misroute.
pub fn earthagent_backend() -> ScriptedBackend {
    ScriptedBackend::new("{}")
        // Coastal-erosion route.
        .rule(
            ["third layer", "coastal erosion along the shoreline"],
            r#"{"selected_agent": "OceanographerAgent", "subtask": "quantify the erosion trend"}"#,
        )
        .rule(
            ["layer 2 experts", "coastal erosion along the shoreline"],
            r#"{"selected_agents": [{"name": "SemanticSegmentorAgent", "subtask": "segment shoreline water"}]}"#,
        )
        .rule(
            ["layer 1 experts", "coastal erosion along the shoreline"],
            r#"{"selected_agents": [
                {"name": "DataFetcherAgent", "subtask": "acquire imagery"},
                {"name": "PreprocessingAgent", "subtask": "correct imagery"}
            ]}"#,
        )
        .rule(
            ["DataFetcherAgent expert", "coastal erosion along the shoreline"],
            r#"{"tools": ["recommend_satellite_platforms", "download_satellite_imagery"]}"#,
        )
        .rule(
            ["PreprocessingAgent expert", "coastal erosion along the shoreline"],
            r#"{"tools": ["geometric_correction", "atmospheric_correction", "cloud_mask_removal"]}"#,
        )
        .rule(
            ["SemanticSegmentorAgent expert", "coastal erosion along the shoreline"],
            r#"{"tools": ["segment_water_bodies"]}"#,
        )
        .rule(
            ["OceanographerAgent expert", "coastal erosion along the shoreline"],
            r#"{"tools": ["assess_coastal_erosion", "statistical_analysis", "generate_analysis_reports"]}"#,
        )
        // Crop-health route: keyword routing on the query's "crops across".
        .rule(
            ["third layer", "crops across"],
            r#"{"selected_agent": "AgriScoutAgent", "subtask": "assess crop health"}"#,
        )
        .rule(
            ["layer 2 experts", "crops across"],
            r#"{"selected_agents": [{"name": "SemanticSegmentorAgent", "subtask": "segment vegetation"}]}"#,
        )
        .rule(
            ["layer 1 experts", "crops across"],
            r#"{"selected_agents": [{"name": "DataFetcherAgent", "subtask": "acquire imagery"}]}"#,
        )
        .rule(
            ["AgriScoutAgent expert"],
            r#"{"tools": ["monitor_crop_health", "detect_plant_diseases"]}"#,
        )
        // Generic fallback route.
        .rule(
            ["third layer"],
            r#"{"selected_agent": "GeneralChatBotAgent", "subtask": "answer"}"#,
        )
        .rule(
            ["layer 2 experts"],
            r#"{"selected_agents": [{"name": "SemanticSegmentorAgent", "subtask": "classify"}]}"#,
        )
        .rule(
            ["layer 1 experts"],
            r#"{"selected_agents": [{"name": "DataFetcherAgent", "subtask": "fetch"}]}"#,
        )
        .rule(
            ["DataFetcherAgent expert"],
            r#"{"tools": ["download_satellite_imagery"]}"#,
        )
        .rule(
            ["SemanticSegmentorAgent expert"],
            r#"{"tools": ["classify_land_cover"]}"#,
        )
        .rule(
            ["GeneralChatBotAgent expert"],
            r#"{"tools": ["statistical_analysis", "generate_analysis_reports"]}"#,
        )
}

pub fn fixture_queries() -> Vec<String> {
    let mut queries = vec![COASTAL_QUERY.to_string(), CROP_QUERY.to_string()];
    for topic in [
        "urban expansion downtown",
        "flood recovery along the river basin",
        "deforestation in the reserve",
        "mineral exploration at the canyon",
        "vessel traffic near the harbor",
        "reservoir conditions in June",
        "earthquake damage in the county",
    ] {
        queries.push(format!("Report on {topic}."));
    }
    queries.push("What is a typical land cover workflow?".to_string());
    queries
}

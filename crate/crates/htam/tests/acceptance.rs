//! Acceptance suite. Each test implements one numbered criterion at its
//! stated tolerance and prints a single pass line; a failed assertion is
//! the corresponding fail line.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Instant;

use htam::backend::{LexicalEmbedder, ScriptedBackend};
use htam::benchgen::{
    build_benchmark, deduplicate, write_jsonl, BenchConfig, Complexity, DomainKeywordTable,
    TaskRecord,
};
use htam::graph::{
    check_stratification, coarsen_layers, pagerank_centrality, stratify_longest_path, CostModel,
    PageRankOptions, ToolCatalog, ToolSpec,
};
use htam::harness::{
    emit_report, run_evaluation, tool_usage_stats, BackendKind, BackendSettings, EmbeddingSettings,
    JudgeKind, JudgeSettings, MetricSettings, RunConfig,
};
use htam::metrics::{
    elo_expected, key_precision, key_recall, path_similarity, run_tournament,
    weighted_edit_distance, BattleTask, ExactMatchSimilarity, JudgeError, PlanJudge, Verdict,
};
use htam::planner::{plan_debate, plan_htam, DebateSchedule, PlannerConfig, Registry};

fn pass(criterion: u32, summary: &str) {
    println!("[acceptance] criterion {criterion}: PASS - {summary}");
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn asset(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("assets")
        .join(name)
}

#[test]
fn criterion_01_edit_distance_oracle_equivalence() {
    let started = Instant::now();
    let tools: Vec<String> = vec!["alpha".into(), "beta".into(), "gamma".into()];
    let sequences = common::all_sequences(&tools, 4);
    assert_eq!(sequences.len(), 121, "1 + 3 + 9 + 27 + 81 sequences");
    let mut rng = common::rng(1001);
    let mut checked = 0usize;
    for _model in 0..5 {
        let cost = common::random_cost_model(&tools, &mut rng);
        let sim = common::RandomSimilarity::new(&tools, &mut rng);
        for agent in &sequences {
            for gt in &sequences {
                let dp = weighted_edit_distance(agent, gt, &cost, &sim);
                let oracle = common::brute_force_edit_distance(agent, gt, &cost, &sim);
                assert!(
                    (dp - oracle).abs() < 1e-9,
                    "{agent:?} vs {gt:?}: dp {dp}, oracle {oracle}"
                );
                checked += 1;
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}, budget 30s");
    pass(
        1,
        &format!("{checked} pairs x 5 cost models agree within 1e-9 in {elapsed:?}"),
    );
}

#[test]
fn criterion_02_uniform_mode_reduction() {
    let tools: Vec<String> = vec!["alpha".into(), "beta".into(), "gamma".into()];
    let cost = CostModel::uniform(1.0).unwrap();
    let mut rng = common::rng(1002);
    for round in 0..1000 {
        let a = common::random_sequence(&tools, 10, &mut rng);
        let b = common::random_sequence(&tools, 10, &mut rng);
        let dp = weighted_edit_distance(&a, &b, &cost, &ExactMatchSimilarity);
        let classical = common::classical_levenshtein(&a, &b);
        assert_eq!(dp, classical as f64, "round {round}: {a:?} vs {b:?}");
    }
    pass(2, "1000 random pairs equal classical Levenshtein exactly");
}

#[test]
fn criterion_03_path_similarity_bounds() {
    let tools: Vec<String> = vec!["alpha".into(), "beta".into(), "gamma".into()];
    let mut rng = common::rng(1003);
    let mut checked = 0usize;
    while checked < 10_000 {
        let cost = common::random_cost_model(&tools, &mut rng);
        let sim = common::RandomSimilarity::new(&tools, &mut rng);
        for _ in 0..100 {
            let a = common::random_sequence(&tools, 8, &mut rng);
            let b = common::random_sequence(&tools, 8, &mut rng);
            if a.is_empty() && b.is_empty() {
                continue;
            }
            let score = path_similarity(&a, &b, &cost, &sim).unwrap();
            assert!((0.0..=1.0).contains(&score), "{a:?} vs {b:?}: {score}");
            let exact = path_similarity(&a, &b, &cost, &ExactMatchSimilarity).unwrap();
            assert_eq!(
                exact == 1.0,
                a == b,
                "identity iff under exact match: {a:?} vs {b:?}"
            );
            checked += 1;
        }
    }
    pass(
        3,
        &format!("{checked} random pairs in [0,1]; =1 iff identical"),
    );
}

/// Deterministic verdict table covering a 3-agent, 50-task tournament.
struct CycleJudge;

impl PlanJudge for CycleJudge {
    fn key_steps(&self, _: &str, flow: &[String]) -> Result<Vec<String>, JudgeError> {
        Ok(flow.to_vec())
    }
    fn key_tools(&self, _: &str, flow: &[String]) -> Result<Vec<String>, JudgeError> {
        Ok(flow.to_vec())
    }
    fn completeness(
        &self,
        question: &str,
        label_a: &str,
        _flow_a: &[String],
        label_b: &str,
        _flow_b: &[String],
    ) -> Result<Verdict, JudgeError> {
        let index: usize = question
            .chars()
            .filter(|c| c.is_ascii_digit())
            .collect::<String>()
            .parse()
            .unwrap_or(0);
        Ok(match (index + label_a.len() + label_b.len()) % 3 {
            0 => Verdict::A,
            1 => Verdict::B,
            _ => Verdict::Tie,
        })
    }
    fn provenance(&self) -> String {
        "cycle".into()
    }
}

#[test]
fn criterion_04_elo_expectation_conservation_and_replay() {
    // Expected score at a 200-point gap.
    let (e_a, e_b) = elo_expected(1200.0, 1000.0);
    assert!((e_a - 0.7597).abs() <= 1e-3, "e_a = {e_a}");
    assert!((e_a + e_b - 1.0).abs() < 1e-12);

    // 3-agent, 50-task scripted tournament.
    let agents = ["ant", "bumblebee", "cricket"];
    let mut plans: BTreeMap<String, BTreeMap<String, Vec<String>>> = BTreeMap::new();
    let mut tasks = Vec::new();
    for t in 0..50 {
        let task_id = format!("task-{t:02}");
        tasks.push(BattleTask {
            task_id: task_id.clone(),
            question: format!("question {t}"),
        });
        for agent in agents {
            plans
                .entry(agent.to_string())
                .or_default()
                .insert(task_id.clone(), vec![format!("{agent}_tool")]);
        }
    }
    let state = run_tournament(&plans, &tasks, &CycleJudge, 32.0, 1000.0, None);
    assert_eq!(state.history.len(), 50 * 3);
    assert!(state.skipped.is_empty());

    // Conservation after every battle, replaying the log.
    let mut ratings: BTreeMap<&str, f64> = agents.iter().map(|a| (*a, 1000.0)).collect();
    for battle in &state.history {
        *ratings.get_mut(battle.a.as_str()).unwrap() = battle.r_a_after;
        *ratings.get_mut(battle.b.as_str()).unwrap() = battle.r_b_after;
        let total: f64 = ratings.values().sum();
        assert!(
            (total - 3000.0).abs() < 1e-9,
            "conservation drift after {battle:?}: {total}"
        );
    }

    // Independent sequential replay with the update equations written out.
    let mut replay: BTreeMap<&str, f64> = agents.iter().map(|a| (*a, 1000.0)).collect();
    for task in &tasks {
        for (i, a) in agents.iter().enumerate() {
            for b in agents.iter().skip(i + 1) {
                let verdict = CycleJudge
                    .completeness(&task.question, a, &[], b, &[])
                    .unwrap();
                let s_a = match verdict {
                    Verdict::A => 1.0,
                    Verdict::B => 0.0,
                    Verdict::Tie => 0.5,
                };
                let (r_a, r_b) = (replay[a], replay[b]);
                let e_a = 1.0 / (1.0 + 10f64.powf((r_b - r_a) / 400.0));
                let e_b = 1.0 - e_a;
                *replay.get_mut(a).unwrap() = r_a + 32.0 * (s_a - e_a);
                *replay.get_mut(b).unwrap() = r_b + 32.0 * ((1.0 - s_a) - e_b);
            }
        }
    }
    for agent in agents {
        assert_eq!(
            state.ratings[agent], replay[agent],
            "replay mismatch for {agent}"
        );
    }
    pass(
        4,
        "expected score 0.7597 +- 0.001; 150 battles conserve ratings; replay exact",
    );
}

#[test]
fn criterion_05_correctness_exhaustive_set_arithmetic() {
    let universe = ["w", "x", "y", "z"];
    let mut checked = 0usize;
    for gt_mask in 0u32..16 {
        for agent_mask in 0u32..16 {
            let key_gt: BTreeSet<String> = universe
                .iter()
                .enumerate()
                .filter(|(i, _)| gt_mask & (1 << i) != 0)
                .map(|(_, t)| t.to_string())
                .collect();
            let agent_path: Vec<String> = universe
                .iter()
                .enumerate()
                .filter(|(i, _)| agent_mask & (1 << i) != 0)
                .map(|(_, t)| t.to_string())
                .collect();
            let overlap = key_gt.iter().filter(|t| agent_path.contains(t)).count() as f64;
            match key_recall(&key_gt, &agent_path) {
                Ok(recall) => assert!(
                    (recall - overlap / key_gt.len() as f64).abs() < 1e-12,
                    "recall vs sets for masks {gt_mask}/{agent_mask}"
                ),
                Err(_) => assert!(key_gt.is_empty()),
            }
            let key_agent: BTreeSet<String> = agent_path.iter().cloned().collect();
            let gt_path: Vec<String> = key_gt.iter().cloned().collect();
            let precision = key_precision(&key_agent, &gt_path);
            let expected = if key_agent.is_empty() {
                0.0
            } else {
                overlap / key_agent.len() as f64
            };
            assert!((precision - expected).abs() < 1e-12);
            checked += 1;
        }
    }
    assert_eq!(checked, 256);
    pass(5, "all 256 subset pairs match direct set arithmetic");
}

#[test]
fn criterion_06_pagerank_sum_and_dense_oracle() {
    let mut rng = common::rng(1006);
    for round in 0..1000 {
        let n = rand::Rng::random_range(&mut rng, 2..=15);
        let graph = common::random_dag(n, 0.3, &mut rng);
        let (scores, _) = pagerank_centrality(&graph, &PageRankOptions::default());
        let sum: f64 = scores.values().sum();
        assert!((sum - 1.0).abs() <= 1e-9, "round {round}: sum {sum}");
        if graph.node_count() <= 6 {
            let oracle = common::dense_pagerank(&graph, 0.85);
            for (node, expected) in oracle {
                assert!(
                    (scores[&node] - expected).abs() <= 1e-6,
                    "round {round}, node {node}"
                );
            }
        }
    }
    // Exhaustive coverage of every labeled DAG on up to 4 nodes.
    let mut exhaustive = 0usize;
    for n in 1..=4 {
        for graph in common::enumerate_small_dags(n) {
            let (scores, _) = pagerank_centrality(&graph, &PageRankOptions::default());
            let oracle = common::dense_pagerank(&graph, 0.85);
            for (node, expected) in oracle {
                assert!((scores[&node] - expected).abs() <= 1e-6);
            }
            exhaustive += 1;
        }
    }
    pass(
        6,
        &format!("1000 random DAGs sum to 1 +- 1e-9; dense oracle within 1e-6 incl. {exhaustive} exhaustive small DAGs"),
    );
}

#[test]
fn criterion_07_stratification_soundness() {
    let mut rng = common::rng(1007);
    for round in 0..1000 {
        let n = rand::Rng::random_range(&mut rng, 3..=15);
        let graph = common::random_dag(n, 0.3, &mut rng);
        let layers = stratify_longest_path(&graph).unwrap();
        for (u, v) in graph.edges() {
            assert!(
                layers.layer(u).unwrap() < layers.layer(v).unwrap(),
                "round {round}: non-strict edge ({u}, {v})"
            );
        }
        assert!(check_stratification(&graph, &layers).unwrap().is_empty());

        // A random monotone coarsening never introduces a violation.
        let mut merge = BTreeMap::new();
        let mut coarse = 1usize;
        for layer in 1..=layers.layer_count {
            merge.insert(layer, coarse);
            if layer < layers.layer_count && rand::Rng::random_range(&mut rng, 0..2) == 1 {
                coarse += 1;
            }
        }
        let merged = coarsen_layers(&layers, &merge).unwrap();
        assert!(check_stratification(&graph, &merged).unwrap().is_empty());

        // Non-monotone merges are rejected whenever there is room to invert.
        if layers.layer_count >= 2 {
            let mut inverted = merge.clone();
            inverted.insert(1, 2);
            inverted.insert(2, 1);
            for layer in 3..=layers.layer_count {
                inverted.insert(layer, 2.max(merge[&layer]));
            }
            assert!(coarsen_layers(&layers, &inverted).is_err(), "round {round}");
        }
    }
    pass(
        7,
        "1000 random DAGs: strict layering, sound coarsening, non-monotone merges rejected",
    );
}

#[test]
fn criterion_08_htam_determinism_and_layer_order() {
    let registry = Registry::earthagent();
    let queries = common::fixture_queries();
    assert_eq!(queries.len(), 10);
    let reference: Vec<_> = {
        let backend = common::earthagent_backend();
        queries
            .iter()
            .map(|q| plan_htam(q, &registry, &backend, &PlannerConfig::default()).unwrap())
            .collect()
    };
    for _run in 0..4 {
        let backend = common::earthagent_backend();
        for (query, expected) in queries.iter().zip(&reference) {
            let plan = plan_htam(query, &registry, &backend, &PlannerConfig::default()).unwrap();
            assert_eq!(&plan, expected, "nondeterministic plan for {query:?}");
        }
    }
    for plan in &reference {
        let layers: Vec<usize> = plan
            .trace
            .iter()
            .filter(|t| t.stage == "select_tools")
            .flat_map(|t| t.tools_added.iter().map(move |_| t.layer.unwrap()))
            .collect();
        assert_eq!(layers.len(), plan.steps.len());
        assert!(
            layers.windows(2).all(|w| w[0] <= w[1]),
            "layer order violated"
        );
    }
    let coastal = reference[0].tool_sequence();
    assert_eq!(
        &coastal[..2],
        &[
            "recommend_satellite_platforms",
            "download_satellite_imagery"
        ],
        "coastal fixture prefix"
    );
    pass(
        8,
        "10 queries identical across 5 runs; layer order holds; coastal prefix correct",
    );
}

#[test]
fn criterion_09_debate_call_counts() {
    let registry = Registry::earthagent();
    let catalog = registry.catalog();
    let opener = r#"{"plan": "p", "initial_tool_trajectory": ["download_satellite_imagery"]}"#;
    let reviser = r#"{"advice": "a", "refined_tool_trajectory": ["download_satellite_imagery"]}"#;
    let judged = r#"{"final_tool_trajectory": ["download_satellite_imagery"]}"#;
    let mut config = PlannerConfig {
        debaters: 3,
        debate_schedule: DebateSchedule::new(1, 2, 1),
        ..PlannerConfig::default()
    };
    let backend = ScriptedBackend::new(opener)
        .rule(["You have seen all previous responses"], reviser)
        .rule(["judge/summarizer"], judged);
    plan_debate("q", catalog, &backend, &config).unwrap();
    assert_eq!(backend.calls(), 10, "(1,2,1) schedule");

    config.debate_schedule = DebateSchedule::new(1, 0, 1);
    let backend = ScriptedBackend::new(opener)
        .rule(["You have seen all previous responses"], reviser)
        .rule(["judge/summarizer"], judged);
    plan_debate("q", catalog, &backend, &config).unwrap();
    assert_eq!(backend.calls(), 4, "(1,0,1) schedule");
    pass(9, "3-debater call counts: (1,2,1) = 10, (1,0,1) = 4");
}

#[test]
fn criterion_10_benchgen_pipeline() {
    let catalog = ToolCatalog::new(vec![
        ToolSpec::new("download_satellite_imagery", "Retrieves satellite imagery."),
        ToolSpec::new("cloud_mask_removal", "Masks clouds."),
        ToolSpec::new("segment_water_bodies", "Segments open water."),
        ToolSpec::new("assess_coastal_erosion", "Quantifies coastal erosion."),
        ToolSpec::new("generate_analysis_reports", "Writes the report."),
    ])
    .unwrap();
    let template = serde_json::json!({
        "domain": "Marine & Water Resources",
        "nodes": [
            "download_satellite_imagery", "cloud_mask_removal", "segment_water_bodies",
            "assess_coastal_erosion", "generate_analysis_reports"
        ],
        "edges": [
            ["download_satellite_imagery", "cloud_mask_removal"],
            ["cloud_mask_removal", "segment_water_bodies"],
            ["segment_water_bodies", "assess_coastal_erosion"],
            ["assess_coastal_erosion", "generate_analysis_reports"]
        ],
        "description": "chain"
    })
    .to_string();
    let params = serde_json::json!({
        "parameterized_tools": [
            {"tool": "download_satellite_imagery", "params": {}},
            {"tool": "cloud_mask_removal", "params": {}},
            {"tool": "segment_water_bodies", "params": {}},
            {"tool": "assess_coastal_erosion", "params": {}},
            {"tool": "generate_analysis_reports", "params": {}}
        ]
    })
    .to_string();
    let backend = ScriptedBackend::new("Assess the coastal erosion trend along the bay.")
        .rule(["task dependency template"], template)
        .rule(["Complete parameters for the tool flow"], params);
    let config = BenchConfig {
        domains: vec!["Marine & Water Resources".into()],
        complexities: vec![Complexity::Simple],
        quota: 3,
        seed: 5,
        ..BenchConfig::default()
    };
    let (tasks, report) = build_benchmark(
        &config,
        &catalog,
        &backend,
        &LexicalEmbedder::default(),
        &DomainKeywordTable::builtin(),
    )
    .unwrap();
    assert!(report.failures.is_empty());
    // Identical questions under the lexical embedder are planted
    // near-duplicates; the 0.90 threshold removes all but the first.
    assert_eq!(report.generated, 3);
    assert_eq!(report.removed_dedup, 2);
    assert_eq!(tasks.len(), 1);
    assert_eq!(
        report.generated,
        report.retained
            + report.removed_complexity
            + report.removed_relevance
            + report.removed_dedup
    );

    // Stage order: a task that fails complexity must be counted there, not
    // at relevance, even when its question is also off-domain.
    use htam::benchgen::{
        check_domain_relevance, default_complexity_bands, verify_complexity, ValidationStage,
    };
    let off_band_and_off_domain = TaskRecord {
        task_id: "t".into(),
        question: "Count the violins in the orchestra pit".into(),
        domain: "Marine & Water Resources".into(),
        complexity: Complexity::Complex,
        ground_truth: vec!["a".into()],
        parameterized: vec![],
        key_steps: None,
    };
    let first = verify_complexity(&off_band_and_off_domain, &default_complexity_bands());
    assert_eq!(first.stage, ValidationStage::Complexity);
    assert!(!first.passed, "complexity rejects first");
    let second = check_domain_relevance(
        &off_band_and_off_domain,
        &DomainKeywordTable::builtin(),
        1,
        None,
    );
    assert!(
        !second.passed,
        "relevance would also reject, but runs second"
    );

    // Schema-valid JSONL.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tasks.jsonl");
    write_jsonl(&tasks, &path).unwrap();
    for line in std::fs::read_to_string(&path).unwrap().lines() {
        let value: serde_json::Value = serde_json::from_str(line).unwrap();
        for field in [
            "task_id",
            "question",
            "domain",
            "complexity",
            "ground_truth",
            "parameterized",
            "key_steps",
        ] {
            assert!(value.get(field).is_some(), "missing {field}");
        }
    }

    // Threshold boundary: a planted near-duplicate (punctuation change) is
    // removed at 0.90.
    let mk = |id: &str, q: &str| TaskRecord {
        task_id: id.into(),
        question: q.into(),
        domain: "Marine & Water Resources".into(),
        complexity: Complexity::Simple,
        ground_truth: vec!["a".into()],
        parameterized: vec![],
        key_steps: None,
    };
    let (kept, removed) = deduplicate(
        vec![
            mk("t1", "Assess coastal erosion near the bay"),
            mk("t2", "Assess coastal erosion near the bay!"),
            mk("t3", "Track phytoplankton blooms offshore"),
        ],
        &LexicalEmbedder::default(),
        0.90,
    )
    .unwrap();
    assert_eq!(kept.len(), 2);
    assert_eq!(removed.len(), 1);
    assert_eq!(removed[0].0, "t2");
    pass(
        10,
        "schema-valid JSONL; stage order holds; near-duplicate removed; counts balance",
    );
}

#[test]
fn criterion_11_end_to_end_eval() {
    let config = RunConfig {
        tasks_path: fixture("tasks_10.jsonl"),
        catalog_path: asset("earthagent_catalog.json"),
        graph_path: asset("earthagent_graph.json"),
        registry_path: Some(asset("earthagent_registry.json")),
        architectures: vec!["cot".into(), "plan_execute".into(), "debate".into()],
        external_plans_path: None,
        backend: BackendSettings {
            kind: BackendKind::Scripted,
            rules_path: Some(fixture("scripted_rules.json")),
            ..BackendSettings::default()
        },
        judge: JudgeSettings {
            kind: JudgeKind::Mock,
            model: String::new(),
        },
        embedding: EmbeddingSettings::default(),
        metrics: MetricSettings::default(),
        parallelism: 2,
        seed: 7,
        planner: PlannerConfig::default(),
        output_dir: None,
    };
    let started = Instant::now();
    let report = run_evaluation(&config).unwrap();
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 5.0,
        "eval took {elapsed:?}, budget 5s"
    );
    assert_eq!(report.per_task.len(), 30);

    let dir = tempfile::tempdir().unwrap();
    emit_report(&report, htam::harness::ReportFormat::Json, dir.path()).unwrap();
    emit_report(&report, htam::harness::ReportFormat::Markdown, dir.path()).unwrap();
    let markdown = std::fs::read_to_string(dir.path().join("summary.md")).unwrap();
    for column in [
        "Recall_key",
        "Precision_key",
        "F1_key",
        "Structural",
        "Holistic",
    ] {
        assert!(markdown.contains(column), "markdown missing {column}");
    }
    assert!(dir.path().join("report.json").exists());

    let rerun = run_evaluation(&config).unwrap();
    assert_eq!(
        report.deterministic_body(),
        rerun.deterministic_body(),
        "rerun must be byte-identical with timestamps excluded"
    );
    pass(
        11,
        &format!("10 tasks x 3 architectures in {elapsed:?}; JSON+markdown emitted; rerun byte-identical"),
    );
}

#[test]
fn criterion_12_tool_usage_stats() {
    // Five plans tabulated by hand:
    //   opener: first step of plans 1-3                 -> positions 0, 0, 0
    //   mid:    middle of plan 1 (0.5) and plan 3 (1/3)
    //   closer: last of plans 1-2 (1, 1), solo plan 4 (0)
    let plans: Vec<Vec<String>> = vec![
        vec!["opener".into(), "mid".into(), "closer".into()],
        vec!["opener".into(), "closer".into()],
        vec!["opener".into(), "mid".into(), "x".into(), "y".into()],
        vec!["closer".into()],
        vec!["x".into()],
    ];
    let rows = tool_usage_stats(&plans);
    let by_name: BTreeMap<&str, _> = rows.iter().map(|r| (r.tool.as_str(), r)).collect();
    for row in &rows {
        assert!((0.0..=1.0).contains(&row.avg_std_position), "{row:?}");
    }
    assert_eq!(by_name["opener"].frequency, 3);
    assert_eq!(
        by_name["opener"].avg_std_position, 0.0,
        "first-step-only tool"
    );
    assert!((by_name["mid"].avg_std_position - (0.5 + 1.0 / 3.0) / 2.0).abs() < 1e-12);
    assert!((by_name["closer"].avg_std_position - 2.0 / 3.0).abs() < 1e-12);
    // A tool that only ever appears last scores exactly 1.
    let always_last = tool_usage_stats(&[
        vec!["a".into(), "fin".into()],
        vec!["b".into(), "c".into(), "fin".into()],
    ]);
    let fin = always_last.iter().find(|r| r.tool == "fin").unwrap();
    assert_eq!(fin.avg_std_position, 1.0, "last-step-only tool");
    pass(
        12,
        "positions in [0,1]; boundary tools 0 and 1; 5-plan tabulation matches",
    );
}

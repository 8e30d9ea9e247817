//! End-to-end evaluation: plan every task under every architecture, score
//! correctness and structure, run the Elo tournament, and assemble the
//! report.

mod config;
mod report;

pub use config::{
    BackendKind, BackendSettings, ConfigError, EmbeddingKind, EmbeddingSettings, JudgeKind,
    JudgeSettings, MetricSettings, RunConfig,
};
pub use report::{
    emit_report, render_markdown, Aggregates, EloSection, EvalReport, MetricRecord, Provenance,
    ReportError, ReportFormat, SummaryRow, UsageRow,
};

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use thiserror::Error;

use crate::backend::CompletionBackend;
use crate::benchgen::{read_jsonl, TaskRecord};
use crate::graph::{
    build_cost_model, CentralityScores, CostModel, DependencyGraph, PageRankOptions, ToolCatalog,
};
use crate::metrics::{
    path_similarity, run_tournament, score_correctness, BackendJudge, BattleTask,
    EmbeddingSimilarity, KeySetExtractor, MockJudge, PlanJudge, SimilarityProvider,
};
use crate::planner::{
    plan_cot, plan_debate, plan_htam, plan_plan_execute, plan_react, Architecture, Plan, PlanStep,
    Registry,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Load(String),
    #[error(transparent)]
    Report(#[from] ReportError),
}

/// Index-order-preserving parallel map over a worker pool.
fn parallel_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    if workers <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let slots: Vec<Mutex<Option<R>>> = items.iter().map(|_| Mutex::new(None)).collect();
    let cursor = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers.min(items.len()) {
            scope.spawn(|| loop {
                let index = cursor.fetch_add(1, Ordering::SeqCst);
                let Some(item) = items.get(index) else { break };
                *slots[index].lock().expect("slot poisoned") = Some(f(item));
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| {
            slot.into_inner()
                .expect("slot poisoned")
                .expect("slot filled")
        })
        .collect()
}

/// Per-tool usage frequency and average standardized position across a set
/// of plans. A step at index i of an n-step plan sits at position
/// `i / (n - 1)` (0 for single-step plans); rows sort by frequency with
/// name as the tiebreak.
pub fn tool_usage_stats(plans: &[Vec<String>]) -> Vec<UsageRow> {
    let mut sums: BTreeMap<&str, (usize, f64)> = BTreeMap::new();
    for plan in plans {
        let n = plan.len();
        for (i, tool) in plan.iter().enumerate() {
            let position = if n > 1 {
                i as f64 / (n - 1) as f64
            } else {
                0.0
            };
            let entry = sums.entry(tool).or_insert((0, 0.0));
            entry.0 += 1;
            entry.1 += position;
        }
    }
    let mut rows: Vec<UsageRow> = sums
        .into_iter()
        .map(|(tool, (frequency, total))| UsageRow {
            tool: tool.to_string(),
            frequency,
            avg_std_position: total / frequency as f64,
        })
        .collect();
    rows.sort_by(|a, b| b.frequency.cmp(&a.frequency).then(a.tool.cmp(&b.tool)));
    rows
}

fn empty_plan(architecture: Architecture, reason: String) -> Plan {
    let mut plan = Plan::new(architecture);
    plan.flags.push(reason);
    plan
}

struct EvalContext<'a> {
    catalog: &'a ToolCatalog,
    registry: Option<&'a Registry>,
    external_plans: Option<&'a BTreeMap<String, Vec<String>>>,
    backend: &'a dyn CompletionBackend,
    config: &'a RunConfig,
}

fn produce_plan(ctx: &EvalContext<'_>, architecture: Architecture, task: &TaskRecord) -> Plan {
    let planner_config = &ctx.config.planner;
    let result = match architecture {
        Architecture::Htam => {
            let registry = ctx.registry.expect("validated by config");
            plan_htam(&task.question, registry, ctx.backend, planner_config)
        }
        Architecture::Cot => plan_cot(&task.question, ctx.catalog, ctx.backend, planner_config),
        Architecture::React => plan_react(&task.question, ctx.catalog, ctx.backend, planner_config),
        Architecture::PlanExecute => {
            plan_plan_execute(&task.question, ctx.catalog, ctx.backend, planner_config)
        }
        Architecture::Debate => {
            plan_debate(&task.question, ctx.catalog, ctx.backend, planner_config)
        }
        Architecture::External => {
            let mut plan = Plan::new(Architecture::External);
            match ctx
                .external_plans
                .and_then(|plans| plans.get(&task.task_id))
            {
                Some(tools) => {
                    plan.steps = tools.iter().map(PlanStep::bare).collect();
                }
                None => plan.flags.push("external_plan_missing".into()),
            }
            return plan;
        }
    };
    result.unwrap_or_else(|e| empty_plan(architecture, format!("planning_failed: {e}")))
}

fn score_plan(
    task: &TaskRecord,
    architecture: &str,
    plan: &Plan,
    cost_model: &CostModel,
    similarity: &dyn SimilarityProvider,
    extractor: &KeySetExtractor<'_>,
) -> MetricRecord {
    let agent_seq = plan.tool_sequence();
    let mut flags = plan.flags.clone();
    let (mut recall, mut precision, mut f1_score, mut structural) = (0.0, 0.0, 0.0, 0.0);

    match extractor.extract(
        &task.task_id,
        &task.question,
        &task.ground_truth,
        &agent_seq,
    ) {
        Ok(key_sets) => match score_correctness(&key_sets, &agent_seq, &task.ground_truth) {
            Ok((scores, mut correctness_flags)) => {
                recall = scores.recall;
                precision = scores.precision;
                f1_score = scores.f1;
                flags.append(&mut correctness_flags);
            }
            Err(e) => flags.push(format!("correctness_failed: {e}")),
        },
        Err(e) => flags.push(format!("key_extraction_failed: {e}")),
    }

    match path_similarity(&agent_seq, &task.ground_truth, cost_model, similarity) {
        Ok(value) => structural = value,
        Err(e) => flags.push(format!("structural_failed: {e}")),
    }

    MetricRecord {
        task_id: task.task_id.clone(),
        architecture: architecture.to_string(),
        recall_key: recall,
        precision_key: precision,
        f1_key: f1_score,
        path_similarity: structural,
        flags,
        complexity: task.complexity.to_string(),
        domain: task.domain.clone(),
    }
}

fn load_external_plans(path: &Path) -> Result<BTreeMap<String, Vec<String>>, HarnessError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| HarnessError::Load(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| HarnessError::Load(format!("external plans parse error: {e}")))
}

/// Runs the full evaluation described by `config`: plan, score, tournament,
/// aggregate. Per-task failures become flagged rows with empty plans; the
/// run itself only fails on configuration or input-loading problems.
pub fn run_evaluation(config: &RunConfig) -> Result<EvalReport, HarnessError> {
    config.validate()?;
    let tasks =
        read_jsonl(&config.tasks_path).map_err(|e| HarnessError::Load(format!("tasks: {e}")))?;
    let catalog = ToolCatalog::load(&config.catalog_path)
        .map_err(|e| HarnessError::Load(format!("catalog: {e}")))?;
    let graph = DependencyGraph::load(&config.graph_path)
        .map_err(|e| HarnessError::Load(format!("graph: {e}")))?;
    let registry = match &config.registry_path {
        Some(path) => Some(
            Registry::load(path, catalog.clone())
                .map_err(|e| HarnessError::Load(format!("registry: {e}")))?,
        ),
        None => None,
    };
    let external_plans = match &config.external_plans_path {
        Some(path) => Some(load_external_plans(path)?),
        None => None,
    };
    let backend = config.backend.build()?;
    let embedder = config.embedding.build()?;

    let pagerank = PageRankOptions {
        damping: config.metrics.damping,
        ..PageRankOptions::default()
    };
    let scores = CentralityScores::compute(&graph, &pagerank);
    let cost_model = build_cost_model(
        &scores,
        config.metrics.base_cost,
        config.metrics.alpha,
        config.metrics.uniform_mode,
    )
    .map_err(|e| HarnessError::Load(format!("cost model: {e}")))?;
    let similarity = EmbeddingSimilarity::new(embedder, &catalog);

    let judge: Box<dyn PlanJudge> = match config.judge.kind {
        JudgeKind::Mock => {
            let ground_truth = tasks
                .iter()
                .map(|t| (t.question.clone(), t.ground_truth.clone()))
                .collect();
            Box::new(MockJudge::with_ground_truth(ground_truth))
        }
        JudgeKind::Backend => Box::new(BackendJudge::new(backend.clone(), &config.judge.model)),
    };
    let extractor = KeySetExtractor::new(judge.as_ref());

    let ctx = EvalContext {
        catalog: &catalog,
        registry: registry.as_ref(),
        external_plans: external_plans.as_ref(),
        backend: &backend,
        config,
    };

    // Plan and score every task under every architecture. Tasks within an
    // architecture fan out over the worker pool; results keep task order.
    let mut per_task: Vec<MetricRecord> = Vec::new();
    let mut plans: BTreeMap<String, BTreeMap<String, Vec<String>>> = BTreeMap::new();
    for label in &config.architectures {
        let architecture: Architecture = label.parse().expect("validated by config");
        let scored: Vec<(MetricRecord, Vec<String>)> =
            parallel_map(&tasks, config.parallelism, |task| {
                let plan = produce_plan(&ctx, architecture, task);
                let record = score_plan(task, label, &plan, &cost_model, &similarity, &extractor);
                (record, plan.tool_sequence())
            });
        let by_task = plans.entry(label.clone()).or_default();
        for (task, (record, sequence)) in tasks.iter().zip(scored) {
            per_task.push(record);
            by_task.insert(task.task_id.clone(), sequence);
        }
    }

    // Holistic completeness: one tournament over all tasks plus an
    // independent tournament per complexity block.
    let battle_tasks: Vec<BattleTask> = tasks
        .iter()
        .map(|t| BattleTask {
            task_id: t.task_id.clone(),
            question: t.question.clone(),
        })
        .collect();
    let overall = run_tournament(
        &plans,
        &battle_tasks,
        judge.as_ref(),
        config.metrics.k_factor,
        config.metrics.initial_rating,
        None,
    );
    let mut by_complexity: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
    for complexity in ["Simple", "Medium", "Complex"] {
        let subset: Vec<BattleTask> = tasks
            .iter()
            .filter(|t| t.complexity.to_string() == complexity)
            .map(|t| BattleTask {
                task_id: t.task_id.clone(),
                question: t.question.clone(),
            })
            .collect();
        if subset.is_empty() {
            continue;
        }
        let state = run_tournament(
            &plans,
            &subset,
            judge.as_ref(),
            config.metrics.k_factor,
            config.metrics.initial_rating,
            None,
        );
        by_complexity.insert(complexity.to_string(), state.ratings);
    }
    let elo = EloSection {
        ratings: overall.ratings,
        by_complexity,
        battle_log: overall.history,
        skipped: overall.skipped,
    };

    let usage: BTreeMap<String, Vec<UsageRow>> = plans
        .iter()
        .map(|(label, by_task)| {
            let sequences: Vec<Vec<String>> = tasks
                .iter()
                .filter_map(|t| by_task.get(&t.task_id).cloned())
                .collect();
            (label.clone(), tool_usage_stats(&sequences))
        })
        .collect();

    let aggregates = Aggregates::from_rows(&per_task, &elo);
    Ok(EvalReport {
        per_task,
        aggregates,
        elo,
        usage,
        provenance: Provenance {
            config: serde_json::to_value(config).expect("config serializes"),
            timestamp: chrono::Utc::now().to_rfc3339(),
            seed: config.seed,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupBy {
    Complexity,
    Domain,
    Overall,
}

impl std::str::FromStr for GroupBy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_lowercase().as_str() {
            "complexity" => Ok(GroupBy::Complexity),
            "domain" => Ok(GroupBy::Domain),
            "overall" => Ok(GroupBy::Overall),
            other => Err(format!("unknown grouping {other:?}")),
        }
    }
}

/// Re-derives a summary table from the per-task rows of a saved report.
pub fn summarize(
    report: &EvalReport,
    group_by: GroupBy,
) -> BTreeMap<String, BTreeMap<String, SummaryRow>> {
    let aggregates = Aggregates::from_rows(&report.per_task, &report.elo);
    match group_by {
        GroupBy::Complexity => aggregates.by_complexity,
        GroupBy::Domain => aggregates.by_domain,
        GroupBy::Overall => BTreeMap::from([("Overall".to_string(), aggregates.overall)]),
    }
}

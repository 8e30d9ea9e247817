//! Benchmark task construction: dependency-template generation, path
//! extraction, parameterization, reverse-inference question formulation,
//! and the three-stage validation pipeline (complexity → relevance →
//! dedup).

mod domains;

pub use domains::{builtin_domain_descriptions, Complexity, DomainKeywordTable, DOMAINS};

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backend::{
    cosine, BackendError, CompletionBackend, CompletionRequest, DecodingParams, EmbeddingProvider,
};
use crate::graph::{enumerate_paths, validate_dag, DependencyGraph, ToolCatalog, ToolPath};
use crate::planner::parse::extract_first_json;
use crate::planner::ParamMap;
use crate::prompts;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid dependency template after retry: {0}")]
    InvalidTemplate(String),
    #[error("parameterized tool sequence does not match the input path: {0}")]
    ParameterizationMismatch(String),
    #[error("question formulation returned empty text")]
    EmptyQuestion,
    #[error("embedding provider failure: {0}")]
    ProviderFailure(String),
    #[error("invalid benchmark configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Backend(#[from] BackendError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterizedTool {
    pub tool: String,
    #[serde(default)]
    pub params: ParamMap,
}

/// One benchmark task. Serialized one-per-line in the benchmark JSONL file
/// with exactly these field names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskRecord {
    pub task_id: String,
    pub question: String,
    pub domain: String,
    pub complexity: Complexity,
    pub ground_truth: Vec<String>,
    #[serde(default)]
    pub parameterized: Vec<ParameterizedTool>,
    #[serde(default)]
    pub key_steps: Option<BTreeSet<String>>,
}

impl TaskRecord {
    pub fn ground_truth_path(&self) -> ToolPath {
        ToolPath::new(self.ground_truth.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValidationStage {
    Complexity,
    Relevance,
    Dedup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationOutcome {
    pub stage: ValidationStage,
    pub passed: bool,
    pub detail: String,
}

/// Renders the dependency-template prompt and parses/validates the returned
/// DAG. A cyclic or otherwise invalid graph earns one automatic re-ask
/// before failing.
pub fn generate_dependency_template(
    domain: &str,
    domain_desc: &str,
    tools_number_range: &str,
    catalog: &ToolCatalog,
    backend: &dyn CompletionBackend,
    model: &str,
    params: DecodingParams,
) -> Result<DependencyGraph, BenchError> {
    if catalog.is_empty() {
        return Err(BenchError::InvalidConfig("tool catalog is empty".into()));
    }
    let prompt = prompts::render(
        prompts::DAG_TEMPLATE,
        &[
            ("domain", domain),
            ("domain_desc", domain_desc),
            ("tools_str", &catalog.describe()),
            ("tools_number_range", tools_number_range),
        ],
    );
    let mut last_failure = String::new();
    for attempt in 0..2 {
        let mut request_prompt = prompt.clone();
        if attempt > 0 {
            request_prompt.push_str(&format!(
                "\n\nYour previous answer was rejected ({last_failure}). Return a valid DAG."
            ));
        }
        let request = CompletionRequest::user(model, request_prompt, params);
        let reply = backend.complete(&request)?.text;
        let Some(value) = extract_first_json(&reply) else {
            last_failure = "no JSON found".into();
            continue;
        };
        let graph: DependencyGraph = match serde_json::from_value(value) {
            Ok(graph) => graph,
            Err(e) => {
                last_failure = format!("schema mismatch: {e}");
                continue;
            }
        };
        let report = validate_dag(&graph);
        if report.is_valid() {
            return Ok(graph);
        }
        last_failure = report
            .violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; ");
    }
    Err(BenchError::InvalidTemplate(last_failure))
}

/// Asks the backend to invent realistic parameters for each tool in the
/// path. The output must name the same tools in the same order; parameters
/// not declared in the catalog schema are dropped with a warning.
pub fn parameterize_path(
    path: &ToolPath,
    catalog: &ToolCatalog,
    backend: &dyn CompletionBackend,
    model: &str,
    params: DecodingParams,
) -> Result<(Vec<ParameterizedTool>, Vec<String>), BenchError> {
    let tools_str = path
        .tools
        .iter()
        .map(|t| match catalog.get(t) {
            Some(spec) => {
                let schema = spec
                    .params
                    .iter()
                    .map(|p| format!("{}:{}", p.name, p.param_type))
                    .collect::<Vec<_>>()
                    .join(", ");
                format!("{}: {} (params: {schema})", spec.name, spec.description)
            }
            None => t.clone(),
        })
        .collect::<Vec<_>>()
        .join("\n");
    let prompt = prompts::render(
        prompts::PARAMETERIZE_FLOW,
        &[
            ("tools", &format!("{:?}", path.tools)),
            ("tools_str", &tools_str),
        ],
    );
    let request = CompletionRequest::user(model, prompt, params);
    let reply = backend.complete(&request)?.text;
    let value = extract_first_json(&reply).ok_or_else(|| {
        BenchError::ParameterizationMismatch(format!("no JSON in reply: {reply:?}"))
    })?;
    let items: Vec<ParameterizedTool> = value
        .get("parameterized_tools")
        .cloned()
        .and_then(|v| serde_json::from_value(v).ok())
        .ok_or_else(|| {
            BenchError::ParameterizationMismatch("missing parameterized_tools array".into())
        })?;

    let output_order: Vec<&str> = items.iter().map(|i| i.tool.as_str()).collect();
    let input_order: Vec<&str> = path.tools.iter().map(String::as_str).collect();
    if output_order != input_order {
        return Err(BenchError::ParameterizationMismatch(format!(
            "expected {input_order:?}, got {output_order:?}"
        )));
    }

    let mut warnings = Vec::new();
    let cleaned = items
        .into_iter()
        .map(|mut item| {
            if let Some(spec) = catalog.get(&item.tool) {
                let declared: BTreeSet<&str> =
                    spec.params.iter().map(|p| p.name.as_str()).collect();
                let dropped: Vec<String> = item
                    .params
                    .keys()
                    .filter(|k| !declared.contains(k.as_str()))
                    .cloned()
                    .collect();
                for key in dropped {
                    warnings.push(format!("{}: dropped undeclared param {key}", item.tool));
                    item.params.remove(&key);
                }
            }
            item
        })
        .collect();
    Ok((cleaned, warnings))
}

fn strip_markup(text: &str) -> String {
    let mut t = text.trim();
    for fence in ["```json", "```"] {
        t = t.strip_prefix(fence).unwrap_or(t);
    }
    t = t.strip_suffix("```").unwrap_or(t);
    t.trim()
        .trim_matches(|c| c == '"' || c == '\'' || c == '`')
        .trim()
        .to_string()
}

fn first_sentence(text: &str) -> (String, bool) {
    for (idx, c) in text.char_indices() {
        if matches!(c, '.' | '?' | '!') {
            let end = idx + c.len_utf8();
            let rest = text[end..].trim();
            if !rest.is_empty() {
                return (text[..end].trim().to_string(), true);
            }
            return (text.trim().to_string(), false);
        }
    }
    (text.trim().to_string(), false)
}

/// Reverse-inference question formulation: given the parameterized flow,
/// ask for the one-sentence user question it solves. Over-generation keeps
/// the first sentence and flags the truncation for audit.
pub fn formulate_question(
    parameterized: &[ParameterizedTool],
    backend: &dyn CompletionBackend,
    model: &str,
    params: DecodingParams,
) -> Result<(String, Vec<String>), BenchError> {
    let flow_str = serde_json::to_string(parameterized).expect("parameterized flow serializes");
    let prompt = prompts::render(prompts::GENERATE_TASK, &[("flow_str", &flow_str)]);
    let request = CompletionRequest::user(model, prompt, params);
    let reply = backend.complete(&request)?.text;
    let cleaned = strip_markup(&reply);
    if cleaned.is_empty() {
        return Err(BenchError::EmptyQuestion);
    }
    let (question, truncated) = first_sentence(&cleaned);
    if question.is_empty() {
        return Err(BenchError::EmptyQuestion);
    }
    let mut flags = Vec::new();
    if truncated {
        flags.push("question_truncated_to_first_sentence".to_string());
    }
    Ok((question, flags))
}

/// Inclusive length band per complexity level.
pub type ComplexityBands = BTreeMap<Complexity, (usize, usize)>;

pub fn default_complexity_bands() -> ComplexityBands {
    BTreeMap::from([
        (Complexity::Simple, (3, 6)),
        (Complexity::Medium, (6, 10)),
        (Complexity::Complex, (10, 16)),
    ])
}

/// Stage 1: the ground-truth path length must sit inside the band declared
/// for the task's complexity.
pub fn verify_complexity(task: &TaskRecord, bands: &ComplexityBands) -> ValidationOutcome {
    let len = task.ground_truth.len();
    let Some((min_len, max_len)) = bands.get(&task.complexity).copied() else {
        return ValidationOutcome {
            stage: ValidationStage::Complexity,
            passed: false,
            detail: format!("no band configured for {}", task.complexity),
        };
    };
    let passed = len >= min_len && len <= max_len;
    ValidationOutcome {
        stage: ValidationStage::Complexity,
        passed,
        detail: format!("path length {len}, band {min_len}..={max_len}"),
    }
}

/// Optional second-stage relevance predicate; runs after the keyword filter
/// when enabled.
pub type RelevanceClassifier = dyn Fn(&TaskRecord) -> bool + Send + Sync;

/// Stage 2: case-insensitive substring hits of the task's own domain
/// keywords over the question.
pub fn check_domain_relevance(
    task: &TaskRecord,
    keyword_table: &DomainKeywordTable,
    min_hits: usize,
    classifier: Option<&RelevanceClassifier>,
) -> ValidationOutcome {
    let Some(keywords) = keyword_table.keywords(&task.domain) else {
        return ValidationOutcome {
            stage: ValidationStage::Relevance,
            passed: false,
            detail: format!("unknown domain {}", task.domain),
        };
    };
    let question = task.question.to_lowercase();
    let hits = keywords
        .iter()
        .filter(|k| question.contains(k.as_str()))
        .count();
    if hits < min_hits {
        return ValidationOutcome {
            stage: ValidationStage::Relevance,
            passed: false,
            detail: format!("{hits} keyword hits < required {min_hits}"),
        };
    }
    if let Some(classifier) = classifier {
        if !classifier(task) {
            return ValidationOutcome {
                stage: ValidationStage::Relevance,
                passed: false,
                detail: "classifier rejected".into(),
            };
        }
    }
    ValidationOutcome {
        stage: ValidationStage::Relevance,
        passed: true,
        detail: format!("{hits} keyword hits"),
    }
}

/// Retained tasks plus (dropped, kept) duplicate pairs.
pub type DedupOutcome = (Vec<TaskRecord>, Vec<(String, String)>);

/// Stage 3: greedy semantic deduplication in input order. A task is dropped
/// when its question's cosine similarity to an already-retained question
/// exceeds the threshold (exact-duplicate vectors always count). Provider
/// failures abort: dedup must not silently pass everything through.
pub fn deduplicate(
    tasks: Vec<TaskRecord>,
    embedder: &dyn EmbeddingProvider,
    threshold: f64,
) -> Result<DedupOutcome, BenchError> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(BenchError::InvalidConfig(format!(
            "dedup threshold must be in (0, 1], got {threshold}"
        )));
    }
    let questions: Vec<String> = tasks.iter().map(|t| t.question.clone()).collect();
    let vectors = embedder
        .embed(&questions)
        .map_err(|e| BenchError::ProviderFailure(e.to_string()))?;
    if vectors.len() != tasks.len() {
        return Err(BenchError::ProviderFailure(format!(
            "expected {} vectors, got {}",
            tasks.len(),
            vectors.len()
        )));
    }

    let mut retained: Vec<TaskRecord> = Vec::new();
    let mut retained_vectors: Vec<&Vec<f64>> = Vec::new();
    let mut removed: Vec<(String, String)> = Vec::new();
    for (task, vector) in tasks.iter().zip(vectors.iter()) {
        let duplicate_of = retained_vectors
            .iter()
            .enumerate()
            .find(|(_, kept)| {
                let sim = cosine(vector, kept);
                sim > threshold || sim >= 1.0 - 1e-12
            })
            .map(|(idx, _)| retained[idx].task_id.clone());
        match duplicate_of {
            Some(kept_id) => removed.push((task.task_id.clone(), kept_id)),
            None => {
                retained.push(task.clone());
                retained_vectors.push(vector);
            }
        }
    }
    Ok((retained, removed))
}

/// Per-(domain, complexity) generation quotas and pipeline settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchConfig {
    pub domains: Vec<String>,
    pub complexities: Vec<Complexity>,
    /// Tasks to construct per (domain, complexity) cell.
    pub quota: usize,
    #[serde(default = "default_complexity_bands")]
    pub complexity_bands: ComplexityBands,
    pub min_hits: usize,
    pub dedup_threshold: f64,
    pub max_paths: usize,
    pub max_len: usize,
    pub seed: u64,
    pub model: String,
    #[serde(default)]
    pub params: DecodingParams,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            domains: DOMAINS.iter().map(|d| d.to_string()).collect(),
            complexities: Complexity::ALL.to_vec(),
            quota: 2,
            complexity_bands: default_complexity_bands(),
            min_hits: 1,
            dedup_threshold: 0.90,
            max_paths: 64,
            max_len: 20,
            seed: 0,
            model: String::new(),
            params: DecodingParams::default(),
        }
    }
}

impl BenchConfig {
    fn tools_number_range(&self, complexity: Complexity) -> &'static str {
        match complexity {
            Complexity::Simple => "5-10",
            Complexity::Medium => "8-15",
            Complexity::Complex => "12-20",
        }
    }
}

/// Stage accounting for one pipeline run. The counts satisfy
/// `generated = retained + removed_complexity + removed_relevance +
/// removed_dedup`; construction failures never enter `generated`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub generated: usize,
    pub removed_complexity: usize,
    pub removed_relevance: usize,
    pub removed_dedup: usize,
    pub retained: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub audit_flags: Vec<String>,
}

fn deterministic_uuid(rng: &mut ChaCha8Rng) -> String {
    uuid::Builder::from_random_bytes(rng.random())
        .into_uuid()
        .to_string()
}

/// Runs the full construction pipeline: one dependency template per
/// (domain, complexity) cell, seeded round-robin path sampling up to the
/// quota, parameterization, question formulation, then the three validation
/// stages with first-failure-wins accounting. Per-task failures are
/// recorded and never abort the batch.
pub fn build_benchmark(
    config: &BenchConfig,
    catalog: &ToolCatalog,
    backend: &dyn CompletionBackend,
    embedder: &dyn EmbeddingProvider,
    keyword_table: &DomainKeywordTable,
) -> Result<(Vec<TaskRecord>, PipelineReport), BenchError> {
    let descriptions = builtin_domain_descriptions();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = PipelineReport::default();
    let mut candidates: Vec<TaskRecord> = Vec::new();

    for domain in &config.domains {
        for &complexity in &config.complexities {
            let cell = format!("{domain}/{complexity}");
            let domain_desc = descriptions.get(domain).cloned().unwrap_or_default();
            let template = match generate_dependency_template(
                domain,
                &domain_desc,
                config.tools_number_range(complexity),
                catalog,
                backend,
                &config.model,
                config.params,
            ) {
                Ok(template) => template,
                Err(e) => {
                    report.failures.push(format!("{cell}: {e}"));
                    continue;
                }
            };
            let paths = enumerate_paths(&template, config.max_paths, config.max_len);
            if paths.is_empty() {
                report
                    .failures
                    .push(format!("{cell}: template has no extractable paths"));
                continue;
            }
            let offset = rng.random_range(0..paths.len());
            for i in 0..config.quota {
                let path = &paths[(offset + i) % paths.len()];
                let (parameterized, warnings) =
                    match parameterize_path(path, catalog, backend, &config.model, config.params) {
                        Ok(result) => result,
                        Err(e) => {
                            report.failures.push(format!("{cell}: {e}"));
                            continue;
                        }
                    };
                for warning in warnings {
                    report.audit_flags.push(format!("{cell}: {warning}"));
                }
                let (question, flags) =
                    match formulate_question(&parameterized, backend, &config.model, config.params)
                    {
                        Ok(result) => result,
                        Err(e) => {
                            report.failures.push(format!("{cell}: {e}"));
                            continue;
                        }
                    };
                let task = TaskRecord {
                    task_id: deterministic_uuid(&mut rng),
                    question,
                    domain: domain.clone(),
                    complexity,
                    ground_truth: path.tools.clone(),
                    parameterized,
                    key_steps: None,
                };
                for flag in flags {
                    report.audit_flags.push(format!("{}: {flag}", task.task_id));
                }
                report.generated += 1;
                // Stage order is fixed: complexity first, then relevance;
                // the first failing stage owns the rejection.
                let complexity_check = verify_complexity(&task, &config.complexity_bands);
                if !complexity_check.passed {
                    report.removed_complexity += 1;
                    report.audit_flags.push(format!(
                        "{}: complexity: {}",
                        task.task_id, complexity_check.detail
                    ));
                    continue;
                }
                let relevance = check_domain_relevance(&task, keyword_table, config.min_hits, None);
                if !relevance.passed {
                    report.removed_relevance += 1;
                    report
                        .audit_flags
                        .push(format!("{}: relevance: {}", task.task_id, relevance.detail));
                    continue;
                }
                candidates.push(task);
            }
        }
    }

    let (retained, removed_pairs) = deduplicate(candidates, embedder, config.dedup_threshold)?;
    report.removed_dedup = removed_pairs.len();
    for (dropped, kept) in &removed_pairs {
        report
            .audit_flags
            .push(format!("{dropped}: dedup: duplicate of {kept}"));
    }
    report.retained = retained.len();
    Ok((retained, report))
}

/// Writes one task per line.
pub fn write_jsonl(tasks: &[TaskRecord], path: impl AsRef<Path>) -> std::io::Result<()> {
    let mut file = std::fs::File::create(path)?;
    for task in tasks {
        let line = serde_json::to_string(task).expect("task serializes");
        writeln!(file, "{line}")?;
    }
    Ok(())
}

pub fn read_jsonl(path: impl AsRef<Path>) -> Result<Vec<TaskRecord>, BenchError> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| BenchError::InvalidConfig(format!("{}: {e}", path.as_ref().display())))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            serde_json::from_str(line)
                .map_err(|e| BenchError::InvalidConfig(format!("bad task line: {e}")))
        })
        .collect()
}

//! Evaluation report: per-task metric rows, grouped aggregates, Elo
//! results, tool-usage statistics, and the JSON/CSV/markdown emitters.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{BattleRecord, SkippedBattle};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("io failure: {0}")]
    IoFailure(String),
    #[error("report parse error: {0}")]
    Parse(String),
    #[error("aggregates do not match per-task rows: {0}")]
    Inconsistent(String),
}

/// Per-task metric record, one row per (task, architecture).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    pub task_id: String,
    pub architecture: String,
    pub recall_key: f64,
    pub precision_key: f64,
    pub f1_key: f64,
    pub path_similarity: f64,
    #[serde(default)]
    pub flags: Vec<String>,
    /// Grouping keys carried for re-summarization.
    pub complexity: String,
    pub domain: String,
}

/// Mean metric values for one architecture within one group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub recall_key: f64,
    pub precision_key: f64,
    pub f1_key: f64,
    pub structural: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holistic: Option<f64>,
    pub task_count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    /// architecture → row over all tasks.
    pub overall: BTreeMap<String, SummaryRow>,
    /// complexity → architecture → row.
    pub by_complexity: BTreeMap<String, BTreeMap<String, SummaryRow>>,
    /// domain → architecture → row.
    pub by_domain: BTreeMap<String, BTreeMap<String, SummaryRow>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EloSection {
    /// Final ratings over the full task set.
    pub ratings: BTreeMap<String, f64>,
    /// Independent per-complexity tournaments (each block has its own
    /// ratings).
    pub by_complexity: BTreeMap<String, BTreeMap<String, f64>>,
    pub battle_log: Vec<BattleRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<SkippedBattle>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UsageRow {
    pub tool: String,
    pub frequency: usize,
    pub avg_std_position: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// Snapshot of the run configuration as JSON.
    pub config: serde_json::Value,
    /// RFC 3339; excluded from determinism comparisons.
    pub timestamp: String,
    pub seed: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_task: Vec<MetricRecord>,
    pub aggregates: Aggregates,
    pub elo: EloSection,
    /// architecture → usage table sorted by frequency (ties by name).
    pub usage: BTreeMap<String, Vec<UsageRow>>,
    pub provenance: Provenance,
}

impl EvalReport {
    /// True when any plan failed, any battle was skipped, or any metric row
    /// carries an error-ish flag.
    pub fn has_partial_failures(&self) -> bool {
        !self.elo.skipped.is_empty()
            || self
                .per_task
                .iter()
                .any(|r| r.flags.iter().any(|f| f.starts_with("planning_failed")))
    }

    /// The report body with volatile provenance fields cleared, for
    /// byte-identity comparisons across reruns.
    pub fn deterministic_body(&self) -> String {
        let mut clone = self.clone();
        clone.provenance.timestamp = String::new();
        serde_json::to_string_pretty(&clone).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        let report: EvalReport =
            serde_json::from_str(text).map_err(|e| ReportError::Parse(e.to_string()))?;
        report.check_consistency()?;
        Ok(report)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ReportError> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| ReportError::IoFailure(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json(&text)
    }

    /// Recomputes every aggregate from the per-task rows and compares.
    pub fn check_consistency(&self) -> Result<(), ReportError> {
        let recomputed = Aggregates::from_rows(&self.per_task, &self.elo);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12;
        let row_close = |a: &SummaryRow, b: &SummaryRow| {
            close(a.recall_key, b.recall_key)
                && close(a.precision_key, b.precision_key)
                && close(a.f1_key, b.f1_key)
                && close(a.structural, b.structural)
                && a.task_count == b.task_count
        };
        for (label, row) in &recomputed.overall {
            let stored = self.aggregates.overall.get(label).ok_or_else(|| {
                ReportError::Inconsistent(format!("missing overall row for {label}"))
            })?;
            if !row_close(row, stored) {
                return Err(ReportError::Inconsistent(format!(
                    "overall row for {label} does not match its per-task rows"
                )));
            }
        }
        Ok(())
    }
}

impl Aggregates {
    /// Means per group; `holistic` is attached from the Elo section
    /// (per-complexity blocks use their own tournament's ratings).
    pub fn from_rows(rows: &[MetricRecord], elo: &EloSection) -> Self {
        let mut aggregates = Aggregates::default();
        let mut overall: BTreeMap<String, Vec<&MetricRecord>> = BTreeMap::new();
        let mut by_complexity: BTreeMap<String, BTreeMap<String, Vec<&MetricRecord>>> =
            BTreeMap::new();
        let mut by_domain: BTreeMap<String, BTreeMap<String, Vec<&MetricRecord>>> = BTreeMap::new();
        for row in rows {
            overall
                .entry(row.architecture.clone())
                .or_default()
                .push(row);
            by_complexity
                .entry(row.complexity.clone())
                .or_default()
                .entry(row.architecture.clone())
                .or_default()
                .push(row);
            by_domain
                .entry(row.domain.clone())
                .or_default()
                .entry(row.architecture.clone())
                .or_default()
                .push(row);
        }
        let summarize = |rows: &[&MetricRecord], holistic: Option<f64>| {
            let n = rows.len().max(1) as f64;
            SummaryRow {
                recall_key: rows.iter().map(|r| r.recall_key).sum::<f64>() / n,
                precision_key: rows.iter().map(|r| r.precision_key).sum::<f64>() / n,
                f1_key: rows.iter().map(|r| r.f1_key).sum::<f64>() / n,
                structural: rows.iter().map(|r| r.path_similarity).sum::<f64>() / n,
                holistic,
                task_count: rows.len(),
            }
        };
        for (label, rows) in &overall {
            let holistic = elo.ratings.get(label).copied();
            aggregates
                .overall
                .insert(label.clone(), summarize(rows, holistic));
        }
        for (complexity, by_arch) in &by_complexity {
            let block = aggregates
                .by_complexity
                .entry(complexity.clone())
                .or_default();
            for (label, rows) in by_arch {
                let holistic = elo
                    .by_complexity
                    .get(complexity)
                    .and_then(|m| m.get(label))
                    .copied();
                block.insert(label.clone(), summarize(rows, holistic));
            }
        }
        for (domain, by_arch) in &by_domain {
            let block = aggregates.by_domain.entry(domain.clone()).or_default();
            for (label, rows) in by_arch {
                block.insert(label.clone(), summarize(rows, None));
            }
        }
        aggregates
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(format!("unknown report format {other:?}")),
        }
    }
}

/// Renders the summary grouped like the headline results table: one block
/// per complexity plus an Overall block, columns Recall, Precision, F1,
/// Structural, Holistic.
pub fn render_markdown(report: &EvalReport) -> String {
    let mut out = String::new();
    out.push_str("| Difficulty | Architecture | Recall_key | Precision_key | F1_key | Structural | Holistic |\n");
    out.push_str("|---|---|---|---|---|---|---|\n");
    let mut blocks: Vec<(&str, &BTreeMap<String, SummaryRow>)> = Vec::new();
    for complexity in ["Simple", "Medium", "Complex"] {
        if let Some(block) = report.aggregates.by_complexity.get(complexity) {
            blocks.push((complexity, block));
        }
    }
    // Other group labels (e.g. domains, when re-summarized) in sorted order.
    for (label, block) in &report.aggregates.by_complexity {
        if !["Simple", "Medium", "Complex"].contains(&label.as_str()) {
            blocks.push((label, block));
        }
    }
    blocks.push(("Overall", &report.aggregates.overall));
    for (difficulty, block) in blocks {
        for (label, row) in block {
            let holistic = row
                .holistic
                .map(|h| format!("{h:.2}"))
                .unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "| {difficulty} | {label} | {:.2} | {:.2} | {:.2} | {:.2} | {holistic} |\n",
                row.recall_key, row.precision_key, row.f1_key, row.structural
            ));
        }
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<(), ReportError> {
    let mut file = std::fs::File::create(path)
        .map_err(|e| ReportError::IoFailure(format!("{}: {e}", path.display())))?;
    file.write_all(contents.as_bytes())
        .map_err(|e| ReportError::IoFailure(format!("{}: {e}", path.display())))
}

fn csv_per_task(report: &EvalReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "task_id",
        "architecture",
        "complexity",
        "domain",
        "recall_key",
        "precision_key",
        "f1_key",
        "path_similarity",
        "flags",
    ])
    .expect("csv header");
    for row in &report.per_task {
        w.write_record([
            row.task_id.as_str(),
            row.architecture.as_str(),
            row.complexity.as_str(),
            row.domain.as_str(),
            &row.recall_key.to_string(),
            &row.precision_key.to_string(),
            &row.f1_key.to_string(),
            &row.path_similarity.to_string(),
            &row.flags.join(";"),
        ])
        .expect("csv row");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("utf8 csv")
}

fn csv_summary(report: &EvalReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "group",
        "architecture",
        "recall_key",
        "precision_key",
        "f1_key",
        "structural",
        "holistic",
        "task_count",
    ])
    .expect("csv header");
    let mut write_block = |group: &str, block: &BTreeMap<String, SummaryRow>| {
        for (label, row) in block {
            w.write_record([
                group,
                label.as_str(),
                &row.recall_key.to_string(),
                &row.precision_key.to_string(),
                &row.f1_key.to_string(),
                &row.structural.to_string(),
                &row.holistic.map(|h| h.to_string()).unwrap_or_default(),
                &row.task_count.to_string(),
            ])
            .expect("csv row");
        }
    };
    for (complexity, block) in &report.aggregates.by_complexity {
        write_block(complexity, block);
    }
    for (domain, block) in &report.aggregates.by_domain {
        write_block(domain, block);
    }
    write_block("Overall", &report.aggregates.overall);
    String::from_utf8(w.into_inner().expect("csv flush")).expect("utf8 csv")
}

fn csv_usage(report: &EvalReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["architecture", "tool", "frequency", "avg_std_position"])
        .expect("csv header");
    for (label, rows) in &report.usage {
        for row in rows {
            w.write_record([
                label.as_str(),
                row.tool.as_str(),
                &row.frequency.to_string(),
                &row.avg_std_position.to_string(),
            ])
            .expect("csv row");
        }
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("utf8 csv")
}

/// Heatmap-ready matrix: tool rows, architecture columns, cells are the
/// average standardized position (empty when the architecture never used
/// the tool).
fn csv_positions(report: &EvalReport) -> String {
    let architectures: Vec<&String> = report.usage.keys().collect();
    let mut tools: Vec<&String> = report
        .usage
        .values()
        .flat_map(|rows| rows.iter().map(|r| &r.tool))
        .collect();
    tools.sort();
    tools.dedup();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["tool".to_string()];
    header.extend(architectures.iter().map(|a| (*a).clone()));
    w.write_record(&header).expect("csv header");
    for tool in tools {
        let mut record = vec![tool.clone()];
        for arch in &architectures {
            let cell = report.usage[*arch]
                .iter()
                .find(|r| &r.tool == tool)
                .map(|r| r.avg_std_position.to_string())
                .unwrap_or_default();
            record.push(cell);
        }
        w.write_record(&record).expect("csv row");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("utf8 csv")
}

/// Writes the report into `dir` and returns the created paths. JSON is the
/// full report; CSV is four files (per-task rows, summary, usage, and the
/// tool × architecture position matrix); markdown is the headline table.
pub fn emit_report(
    report: &EvalReport,
    format: ReportFormat,
    dir: impl AsRef<Path>,
) -> Result<Vec<PathBuf>, ReportError> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)
        .map_err(|e| ReportError::IoFailure(format!("{}: {e}", dir.display())))?;
    let mut written = Vec::new();
    match format {
        ReportFormat::Json => {
            let path = dir.join("report.json");
            write_file(&path, &report.to_json())?;
            written.push(path);
            // Elo outputs: final ratings per architecture, plus the battle
            // log as JSONL.
            let elo_path = dir.join("elo.json");
            write_file(
                &elo_path,
                &serde_json::to_string_pretty(&report.elo.ratings).expect("ratings serialize"),
            )?;
            written.push(elo_path);
            let log_path = dir.join("battle_log.jsonl");
            let mut log = String::new();
            for battle in &report.elo.battle_log {
                log.push_str(&serde_json::to_string(battle).expect("battle serializes"));
                log.push('\n');
            }
            write_file(&log_path, &log)?;
            written.push(log_path);
        }
        ReportFormat::Csv => {
            for (name, contents) in [
                ("per_task.csv", csv_per_task(report)),
                ("summary.csv", csv_summary(report)),
                ("usage.csv", csv_usage(report)),
                ("positions.csv", csv_positions(report)),
            ] {
                let path = dir.join(name);
                write_file(&path, &contents)?;
                written.push(path);
            }
        }
        ReportFormat::Markdown => {
            let path = dir.join("summary.md");
            write_file(&path, &render_markdown(report))?;
            written.push(path);
        }
    }
    Ok(written)
}

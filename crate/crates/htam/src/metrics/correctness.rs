//! Key-tool correctness: recall over the ground truth's key set, precision
//! of the agent's key set, and their harmonic mean.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorrectnessError {
    #[error("key set is empty")]
    EmptyKeySet,
}

/// Judge-identified indispensable tools for each side of a comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeySets {
    pub key_gt: BTreeSet<String>,
    pub key_agent: BTreeSet<String>,
    /// Judge identifier, or "mock" for the offline extractor.
    pub provenance: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrectnessScores {
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
}

/// Fraction of the ground truth's key tools present anywhere in the agent
/// path (deduplicated to a set first).
pub fn key_recall(
    key_gt: &BTreeSet<String>,
    agent_path: &[String],
) -> Result<f64, CorrectnessError> {
    if key_gt.is_empty() {
        return Err(CorrectnessError::EmptyKeySet);
    }
    let agent: BTreeSet<&str> = agent_path.iter().map(String::as_str).collect();
    let hits = key_gt.iter().filter(|k| agent.contains(k.as_str())).count();
    Ok(hits as f64 / key_gt.len() as f64)
}

/// Fraction of the agent's key tools present in the full ground-truth path.
/// An empty key set scores 0 rather than erroring; callers surface the
/// degenerate case through the `empty_key` flag of [`score_correctness`].
pub fn key_precision(key_agent: &BTreeSet<String>, gt_path: &[String]) -> f64 {
    if key_agent.is_empty() {
        return 0.0;
    }
    let gt: BTreeSet<&str> = gt_path.iter().map(String::as_str).collect();
    let hits = key_agent.iter().filter(|k| gt.contains(k.as_str())).count();
    hits as f64 / key_agent.len() as f64
}

/// Harmonic mean, 0 when both inputs are 0.
pub fn f1(recall: f64, precision: f64) -> f64 {
    if recall + precision == 0.0 {
        0.0
    } else {
        2.0 * recall * precision / (recall + precision)
    }
}

/// Computes all three correctness scores plus audit flags for degenerate
/// inputs (`empty_key` when the agent key set was empty).
pub fn score_correctness(
    key_sets: &KeySets,
    agent_path: &[String],
    gt_path: &[String],
) -> Result<(CorrectnessScores, Vec<String>), CorrectnessError> {
    let recall = key_recall(&key_sets.key_gt, agent_path)?;
    let precision = key_precision(&key_sets.key_agent, gt_path);
    let mut flags = Vec::new();
    if key_sets.key_agent.is_empty() {
        flags.push("empty_key".to_string());
    }
    Ok((
        CorrectnessScores {
            recall,
            precision,
            f1: f1(recall, precision),
        },
        flags,
    ))
}

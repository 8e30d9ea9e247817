//! Judge contract for key-set extraction and pairwise completeness
//! comparison, with a live backend implementation and a deterministic mock.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Mutex;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::backend::{BackendError, CompletionBackend, CompletionRequest, DecodingParams};
use crate::planner::parse::extract_first_json;
use crate::prompts;

use super::correctness::KeySets;
use super::elo::Verdict;

#[derive(Debug, Error)]
pub enum JudgeError {
    #[error("judge protocol error: {0}")]
    Protocol(String),
    #[error(transparent)]
    Backend(#[from] BackendError),
}

/// The two judge roles the metric suite needs: identifying indispensable
/// tools in a path, and declaring which of two plans is more complete.
pub trait PlanJudge: Send + Sync {
    fn key_steps(&self, question: &str, gt_flow: &[String]) -> Result<Vec<String>, JudgeError>;
    fn key_tools(&self, question: &str, agent_flow: &[String]) -> Result<Vec<String>, JudgeError>;
    fn completeness(
        &self,
        question: &str,
        label_a: &str,
        flow_a: &[String],
        label_b: &str,
        flow_b: &[String],
    ) -> Result<Verdict, JudgeError>;
    fn provenance(&self) -> String;
}

fn flow_text(flow: &[String]) -> String {
    format!(
        "[{}]",
        flow.iter()
            .map(|t| format!("'{t}'"))
            .collect::<Vec<_>>()
            .join(", ")
    )
}

/// LLM-backed judge rendering the extraction and completeness prompts.
pub struct BackendJudge<B> {
    backend: B,
    model: String,
    params: DecodingParams,
}

impl<B: CompletionBackend> BackendJudge<B> {
    pub fn new(backend: B, model: impl Into<String>) -> Self {
        Self {
            backend,
            model: model.into(),
            params: DecodingParams::default(),
        }
    }

    fn ask(&self, prompt: String) -> Result<String, JudgeError> {
        let request = CompletionRequest::user(&self.model, prompt, self.params);
        Ok(self.backend.complete(&request)?.text)
    }

    fn extract_list(&self, text: &str, field: &str) -> Result<Vec<String>, JudgeError> {
        let value = extract_first_json(text)
            .ok_or_else(|| JudgeError::Protocol(format!("no JSON in judge output: {text:?}")))?;
        let list = value
            .get(field)
            .and_then(|v| v.as_array())
            .ok_or_else(|| JudgeError::Protocol(format!("missing {field} array")))?;
        list.iter()
            .map(|item| {
                item.as_str()
                    .map(|s| s.trim().to_string())
                    .ok_or_else(|| JudgeError::Protocol(format!("non-string entry in {field}")))
            })
            .collect()
    }
}

impl<B: CompletionBackend> PlanJudge for BackendJudge<B> {
    fn key_steps(&self, question: &str, gt_flow: &[String]) -> Result<Vec<String>, JudgeError> {
        let prompt = prompts::render(
            prompts::KEY_STEPS_EXTRACTION,
            &[
                ("question", question),
                ("ground_truth_tool_flow", &flow_text(gt_flow)),
            ],
        );
        let reply = self.ask(prompt)?;
        self.extract_list(&reply, "key_steps")
    }

    fn key_tools(&self, question: &str, agent_flow: &[String]) -> Result<Vec<String>, JudgeError> {
        let prompt = prompts::render(
            prompts::KEY_TOOLS_EXTRACTION,
            &[
                ("question", question),
                ("agent_tool_flow", &flow_text(agent_flow)),
            ],
        );
        let reply = self.ask(prompt)?;
        self.extract_list(&reply, "key_tools")
    }

    fn completeness(
        &self,
        question: &str,
        label_a: &str,
        flow_a: &[String],
        label_b: &str,
        flow_b: &[String],
    ) -> Result<Verdict, JudgeError> {
        let prompt = prompts::render(
            prompts::COMPLETENESS_EVALUATION,
            &[
                ("question", question),
                ("agent_a", label_a),
                ("tool_flow_a", &flow_text(flow_a)),
                ("agent_b", label_b),
                ("tool_flow_b", &flow_text(flow_b)),
            ],
        );
        let reply = self.ask(prompt)?;
        Verdict::parse(&reply)
            .ok_or_else(|| JudgeError::Protocol(format!("unparseable verdict: {reply:?}")))
    }

    fn provenance(&self) -> String {
        self.model.clone()
    }
}

/// Offline judge: key sets are the unique tools of the path, and the more
/// complete plan is the one covering more of the known ground truth
/// (questions it has never seen tie).
#[derive(Debug, Default)]
pub struct MockJudge {
    ground_truth: BTreeMap<String, Vec<String>>,
}

impl MockJudge {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_ground_truth(ground_truth: BTreeMap<String, Vec<String>>) -> Self {
        Self { ground_truth }
    }
}

fn unique_in_order(flow: &[String]) -> Vec<String> {
    let mut seen = BTreeSet::new();
    flow.iter()
        .filter(|t| seen.insert(t.as_str().to_string()))
        .cloned()
        .collect()
}

impl PlanJudge for MockJudge {
    fn key_steps(&self, _question: &str, gt_flow: &[String]) -> Result<Vec<String>, JudgeError> {
        Ok(unique_in_order(gt_flow))
    }

    fn key_tools(&self, _question: &str, agent_flow: &[String]) -> Result<Vec<String>, JudgeError> {
        Ok(unique_in_order(agent_flow))
    }

    fn completeness(
        &self,
        question: &str,
        _label_a: &str,
        flow_a: &[String],
        _label_b: &str,
        flow_b: &[String],
    ) -> Result<Verdict, JudgeError> {
        let Some(gt) = self.ground_truth.get(question) else {
            return Ok(Verdict::Tie);
        };
        let gt_set: BTreeSet<&str> = gt.iter().map(String::as_str).collect();
        let coverage = |flow: &[String]| {
            flow.iter()
                .map(String::as_str)
                .collect::<BTreeSet<_>>()
                .intersection(&gt_set)
                .count()
        };
        let (cov_a, cov_b) = (coverage(flow_a), coverage(flow_b));
        Ok(match cov_a.cmp(&cov_b) {
            std::cmp::Ordering::Greater => Verdict::A,
            std::cmp::Ordering::Less => Verdict::B,
            std::cmp::Ordering::Equal => Verdict::Tie,
        })
    }

    fn provenance(&self) -> String {
        "mock".into()
    }
}

fn path_digest(flow: &[String]) -> String {
    let digest = Sha256::digest(flow.join("\u{1f}").as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Key-set extraction with clamping, one retry on empty output, a
/// deduplicated-path fallback, and a per-(task, path) cache.
pub struct KeySetExtractor<'a> {
    judge: &'a dyn PlanJudge,
    cache: Mutex<BTreeMap<(String, String), BTreeSet<String>>>,
}

impl<'a> KeySetExtractor<'a> {
    pub fn new(judge: &'a dyn PlanJudge) -> Self {
        Self {
            judge,
            cache: Mutex::new(BTreeMap::new()),
        }
    }

    fn extract_side(
        &self,
        task_id: &str,
        question: &str,
        flow: &[String],
        gt_side: bool,
    ) -> Result<BTreeSet<String>, JudgeError> {
        let cache_key = (
            format!("{task_id}:{}", if gt_side { "gt" } else { "agent" }),
            path_digest(flow),
        );
        if let Some(hit) = self.cache.lock().expect("cache poisoned").get(&cache_key) {
            return Ok(hit.clone());
        }
        let members: BTreeSet<&str> = flow.iter().map(String::as_str).collect();
        let mut result = BTreeSet::new();
        // The prompt forbids empty lists; retry once, then fall back to the
        // full deduplicated path.
        for _ in 0..2 {
            let raw = if gt_side {
                self.judge.key_steps(question, flow)?
            } else {
                self.judge.key_tools(question, flow)?
            };
            // The judge may not invent tools outside the path.
            result = raw
                .into_iter()
                .filter(|t| members.contains(t.as_str()))
                .collect();
            if !result.is_empty() {
                break;
            }
        }
        if result.is_empty() {
            result = flow.iter().cloned().collect();
        }
        self.cache
            .lock()
            .expect("cache poisoned")
            .insert(cache_key, result.clone());
        Ok(result)
    }

    /// Extracts both key sets for one task/agent-path pairing.
    pub fn extract(
        &self,
        task_id: &str,
        question: &str,
        gt_flow: &[String],
        agent_flow: &[String],
    ) -> Result<KeySets, JudgeError> {
        let key_gt = self.extract_side(task_id, question, gt_flow, true)?;
        let key_agent = if agent_flow.is_empty() {
            BTreeSet::new()
        } else {
            self.extract_side(task_id, question, agent_flow, false)?
        };
        Ok(KeySets {
            key_gt,
            key_agent,
            provenance: self.judge.provenance(),
        })
    }
}

//! The plan shape every planner produces and every metric consumes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Architecture {
    Htam,
    Cot,
    React,
    PlanExecute,
    Debate,
    /// Plans produced outside this crate (e.g. a workflow-search system's
    /// fixed tool list) and loaded for evaluation only.
    External,
}

impl Architecture {
    pub const ALL: [Architecture; 6] = [
        Architecture::Htam,
        Architecture::Cot,
        Architecture::React,
        Architecture::PlanExecute,
        Architecture::Debate,
        Architecture::External,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Architecture::Htam => "htam",
            Architecture::Cot => "cot",
            Architecture::React => "react",
            Architecture::PlanExecute => "plan_execute",
            Architecture::Debate => "debate",
            Architecture::External => "external",
        }
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Architecture {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Architecture::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| format!("unknown architecture {s:?}"))
    }
}

pub type ParamMap = BTreeMap<String, serde_json::Value>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanStep {
    pub tool: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamMap>,
}

impl PlanStep {
    pub fn bare(tool: impl Into<String>) -> Self {
        Self {
            tool: tool.into(),
            params: None,
        }
    }
}

/// One backend exchange, annotated with enough provenance to audit a plan
/// after the fact: which stage issued it, which layer/sub-agent it served,
/// which steps it contributed, and what was rejected as non-catalog output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub stage: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layer: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agent: Option<String>,
    pub prompt: String,
    pub response: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tools_added: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rejects: Vec<String>,
}

impl TraceEntry {
    pub fn new(
        stage: impl Into<String>,
        prompt: impl Into<String>,
        response: impl Into<String>,
    ) -> Self {
        Self {
            stage: stage.into(),
            layer: None,
            agent: None,
            prompt: prompt.into(),
            response: response.into(),
            tools_added: Vec::new(),
            rejects: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub architecture: Architecture,
    pub steps: Vec<PlanStep>,
    #[serde(default)]
    pub trace: Vec<TraceEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

impl Plan {
    pub fn new(architecture: Architecture) -> Self {
        Self {
            architecture,
            steps: Vec::new(),
            trace: Vec::new(),
            flags: Vec::new(),
        }
    }

    /// The metric-visible tool sequence.
    pub fn tool_sequence(&self) -> Vec<String> {
        self.steps.iter().map(|s| s.tool.clone()).collect()
    }

    /// Number of backend exchanges recorded in the trace.
    pub fn backend_calls(&self) -> usize {
        self.trace.len()
    }
}

//! Deterministic prompt→response mock. The first rule whose matchers all
//! appear in the prompt wins; otherwise the default response is returned.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::Deserialize;

use super::{BackendError, CompletionBackend, CompletionRequest, CompletionResponse};

#[derive(Debug, Clone)]
pub struct ScriptRule {
    /// Substrings that must all occur in the prompt text.
    pub matchers: Vec<String>,
    pub response: String,
}

#[derive(Debug, Default)]
pub struct ScriptedBackend {
    rules: Vec<ScriptRule>,
    default_response: String,
    calls: AtomicUsize,
}

impl ScriptedBackend {
    pub fn new(default_response: impl Into<String>) -> Self {
        Self {
            rules: Vec::new(),
            default_response: default_response.into(),
            calls: AtomicUsize::new(0),
        }
    }

    /// Appends a rule; earlier rules take precedence.
    pub fn rule<I, S>(mut self, matchers: I, response: impl Into<String>) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.rules.push(ScriptRule {
            matchers: matchers.into_iter().map(Into::into).collect(),
            response: response.into(),
        });
        self
    }

    /// Number of completions served so far.
    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }

    pub fn from_json(json: &str) -> Result<Self, BackendError> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum OneOrMany {
            One(String),
            Many(Vec<String>),
        }
        #[derive(Deserialize)]
        struct RuleFile {
            #[serde(rename = "match")]
            matcher: OneOrMany,
            response: serde_json::Value,
        }
        #[derive(Deserialize)]
        struct ScriptFile {
            #[serde(default)]
            rules: Vec<RuleFile>,
            #[serde(default)]
            default: serde_json::Value,
        }
        let file: ScriptFile = serde_json::from_str(json)
            .map_err(|e| BackendError::Protocol(format!("script parse error: {e}")))?;
        let mut backend = ScriptedBackend::new(value_to_text(&file.default));
        for rule in file.rules {
            let matchers = match rule.matcher {
                OneOrMany::One(s) => vec![s],
                OneOrMany::Many(v) => v,
            };
            backend = backend.rule(matchers, value_to_text(&rule.response));
        }
        Ok(backend)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, BackendError> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| BackendError::Transport(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json(&text)
    }
}

/// Responses may be written as plain strings or as inline JSON values.
fn value_to_text(value: &serde_json::Value) -> String {
    match value {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Null => String::new(),
        other => other.to_string(),
    }
}

impl CompletionBackend for ScriptedBackend {
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        let prompt = request.prompt_text();
        for rule in &self.rules {
            if rule.matchers.iter().all(|m| prompt.contains(m.as_str())) {
                return Ok(CompletionResponse::text_only(rule.response.clone()));
            }
        }
        Ok(CompletionResponse::text_only(self.default_response.clone()))
    }
}

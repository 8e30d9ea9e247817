//! Run configuration for end-to-end evaluations, loadable from TOML or
//! JSON files mirroring these field names.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backend::{
    cache_wrap, CompletionBackend, DecodingParams, EmbeddingProvider, HttpChatBackend,
    HttpEmbeddingBackend, LexicalEmbedder, ScriptedBackend,
};
use crate::planner::{Architecture, PlannerConfig};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config error: {0}")]
    Invalid(String),
    #[error("config file {path}: {message}")]
    Unreadable { path: PathBuf, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    Scripted,
    Http,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BackendSettings {
    pub kind: BackendKind,
    #[serde(default)]
    pub model: String,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default = "default_max_tokens")]
    pub max_tokens: u32,
    /// Scripted backends: rules file (JSON `{rules, default}`).
    #[serde(default)]
    pub rules_path: Option<PathBuf>,
    /// HTTP backends: override for the `HTAM_API_BASE` env var.
    #[serde(default)]
    pub api_base: Option<String>,
    /// Optional read-through response cache (JSONL store).
    #[serde(default)]
    pub cache_path: Option<PathBuf>,
    #[serde(default = "default_permits")]
    pub permit_limit: usize,
}

fn default_max_tokens() -> u32 {
    2048
}

fn default_permits() -> usize {
    4
}

impl Default for BackendSettings {
    fn default() -> Self {
        Self {
            kind: BackendKind::Scripted,
            model: String::new(),
            temperature: 0.0,
            max_tokens: default_max_tokens(),
            rules_path: None,
            api_base: None,
            cache_path: None,
            permit_limit: default_permits(),
        }
    }
}

impl BackendSettings {
    pub fn decoding_params(&self) -> DecodingParams {
        DecodingParams {
            temperature: self.temperature,
            max_tokens: self.max_tokens,
        }
    }

    pub fn build(&self) -> Result<Arc<dyn CompletionBackend>, ConfigError> {
        let inner: Arc<dyn CompletionBackend> = match self.kind {
            BackendKind::Scripted => {
                let backend = match &self.rules_path {
                    Some(path) => ScriptedBackend::load(path)
                        .map_err(|e| ConfigError::Invalid(format!("scripted rules: {e}")))?,
                    None => ScriptedBackend::new("{}"),
                };
                Arc::new(backend)
            }
            BackendKind::Http => {
                let backend = match &self.api_base {
                    Some(base) => {
                        HttpChatBackend::new(base.clone(), std::env::var("HTAM_API_KEY").ok())
                    }
                    None => HttpChatBackend::from_env()
                        .map_err(|e| ConfigError::Invalid(e.to_string()))?,
                };
                Arc::new(backend.with_permits(self.permit_limit))
            }
        };
        match &self.cache_path {
            Some(path) => Ok(Arc::new(
                cache_wrap(inner, path).map_err(|e| ConfigError::Invalid(e.to_string()))?,
            )),
            None => Ok(inner),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JudgeKind {
    Mock,
    Backend,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JudgeSettings {
    pub kind: JudgeKind,
    #[serde(default)]
    pub model: String,
}

impl Default for JudgeSettings {
    fn default() -> Self {
        Self {
            kind: JudgeKind::Mock,
            model: String::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingKind {
    Lexical,
    Http,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingSettings {
    pub kind: EmbeddingKind,
    #[serde(default)]
    pub model: String,
    #[serde(default = "default_dim")]
    pub dim: usize,
}

fn default_dim() -> usize {
    512
}

impl Default for EmbeddingSettings {
    fn default() -> Self {
        Self {
            kind: EmbeddingKind::Lexical,
            model: String::new(),
            dim: default_dim(),
        }
    }
}

impl EmbeddingSettings {
    pub fn build(&self) -> Result<Arc<dyn EmbeddingProvider>, ConfigError> {
        match self.kind {
            EmbeddingKind::Lexical => Ok(Arc::new(LexicalEmbedder { dim: self.dim })),
            EmbeddingKind::Http => {
                let backend = if self.model.is_empty() {
                    HttpEmbeddingBackend::from_env()
                        .map_err(|e| ConfigError::Invalid(e.to_string()))?
                } else {
                    let base = std::env::var("HTAM_API_BASE")
                        .map_err(|_| ConfigError::Invalid("HTAM_API_BASE is not set".into()))?;
                    HttpEmbeddingBackend::new(base, std::env::var("HTAM_API_KEY").ok(), &self.model)
                };
                Ok(Arc::new(backend))
            }
        }
    }
}

/// Metric knobs: edit-cost construction, PageRank damping, and Elo
/// parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricSettings {
    pub base_cost: f64,
    pub alpha: f64,
    pub damping: f64,
    pub k_factor: f64,
    pub initial_rating: f64,
    pub dedup_threshold: f64,
    pub uniform_mode: bool,
}

impl Default for MetricSettings {
    fn default() -> Self {
        Self {
            base_cost: 1.0,
            alpha: 1.0,
            damping: 0.85,
            k_factor: 32.0,
            initial_rating: 1000.0,
            dedup_threshold: 0.90,
            uniform_mode: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub tasks_path: PathBuf,
    pub catalog_path: PathBuf,
    pub graph_path: PathBuf,
    #[serde(default)]
    pub registry_path: Option<PathBuf>,
    /// Architecture labels to evaluate; `external` loads pre-built plans
    /// from `external_plans_path` instead of planning.
    pub architectures: Vec<String>,
    #[serde(default)]
    pub external_plans_path: Option<PathBuf>,
    #[serde(default)]
    pub backend: BackendSettings,
    #[serde(default)]
    pub judge: JudgeSettings,
    #[serde(default)]
    pub embedding: EmbeddingSettings,
    #[serde(default)]
    pub metrics: MetricSettings,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub planner: PlannerConfig,
    /// Where `eval` writes its report files.
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

fn default_parallelism() -> usize {
    1
}

impl RunConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Unreadable {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let config: RunConfig = if path.extension().and_then(|e| e.to_str()) == Some("json") {
            serde_json::from_str(&text).map_err(|e| ConfigError::Unreadable {
                path: path.to_path_buf(),
                message: e.to_string(),
            })?
        } else {
            toml::from_str(&text).map_err(|e| ConfigError::Unreadable {
                path: path.to_path_buf(),
                message: e.to_string(),
            })?
        };
        // Relative paths resolve against the config file's directory.
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Ok(config.resolved_against(base))
    }

    fn resolved_against(mut self, base: &Path) -> Self {
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&p);
            }
        };
        resolve(&mut self.tasks_path);
        resolve(&mut self.catalog_path);
        resolve(&mut self.graph_path);
        if let Some(p) = self.registry_path.as_mut() {
            resolve(p);
        }
        if let Some(p) = self.external_plans_path.as_mut() {
            resolve(p);
        }
        if let Some(p) = self.backend.rules_path.as_mut() {
            resolve(p);
        }
        if let Some(p) = self.backend.cache_path.as_mut() {
            resolve(p);
        }
        if let Some(p) = self.output_dir.as_mut() {
            resolve(p);
        }
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.architectures.is_empty() {
            return Err(ConfigError::Invalid(
                "architectures must be non-empty".into(),
            ));
        }
        if self.parallelism == 0 {
            return Err(ConfigError::Invalid("parallelism must be >= 1".into()));
        }
        for label in &self.architectures {
            let arch: Architecture = label.parse().map_err(|e: String| ConfigError::Invalid(e))?;
            if arch == Architecture::Htam && self.registry_path.is_none() {
                return Err(ConfigError::Invalid(
                    "htam architecture requires registry_path".into(),
                ));
            }
            if arch == Architecture::External && self.external_plans_path.is_none() {
                return Err(ConfigError::Invalid(
                    "external architecture requires external_plans_path".into(),
                ));
            }
        }
        for (name, path) in [
            ("tasks_path", &self.tasks_path),
            ("catalog_path", &self.catalog_path),
            ("graph_path", &self.graph_path),
        ] {
            if !path.exists() {
                return Err(ConfigError::Invalid(format!(
                    "{name} {} does not exist",
                    path.display()
                )));
            }
        }
        Ok(())
    }
}

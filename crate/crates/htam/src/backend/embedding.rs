//! Embedding providers. All vectors are L2-normalized so cosine similarity
//! reduces to a dot product.

use std::time::Duration;

use serde::Deserialize;
use serde_json::json;

use super::BackendError;

pub trait EmbeddingProvider: Send + Sync {
    /// Embeds each text into a unit-normalized vector, order preserved.
    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, BackendError>;
}

impl<T: EmbeddingProvider + ?Sized> EmbeddingProvider for std::sync::Arc<T> {
    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, BackendError> {
        (**self).embed(texts)
    }
}

/// Cosine similarity of two normalized vectors, clamped to [-1, 1].
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b.iter()).map(|(x, y)| x * y).sum();
    dot.clamp(-1.0, 1.0)
}

fn l2_normalize(v: &mut [f64]) {
    let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

/// Deterministic fallback embedder: hashed counts of lower-cased tokens
/// split on whitespace and underscores. No model, no network, stable across
/// runs and platforms.
#[derive(Debug, Clone)]
pub struct LexicalEmbedder {
    pub dim: usize,
}

impl Default for LexicalEmbedder {
    fn default() -> Self {
        Self { dim: 512 }
    }
}

/// FNV-1a, chosen for stability; `DefaultHasher` is randomized per process.
fn fnv1a(token: &str) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for byte in token.as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

fn tokens(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| c.is_whitespace() || c == '_')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.chars()
                .filter(|c| c.is_alphanumeric())
                .collect::<String>()
                .to_lowercase()
        })
        .filter(|t| !t.is_empty())
}

impl EmbeddingProvider for LexicalEmbedder {
    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, BackendError> {
        Ok(texts
            .iter()
            .map(|text| {
                let mut v = vec![0.0; self.dim];
                for token in tokens(text) {
                    v[(fnv1a(&token) % self.dim as u64) as usize] += 1.0;
                }
                l2_normalize(&mut v);
                v
            })
            .collect())
    }
}

/// Live embeddings endpoint speaking the `{model, input}` / `data[i].embedding`
/// wire shape.
pub struct HttpEmbeddingBackend {
    client: reqwest::blocking::Client,
    base_url: String,
    api_key: Option<String>,
    model: String,
}

impl HttpEmbeddingBackend {
    pub fn new(
        base_url: impl Into<String>,
        api_key: Option<String>,
        model: impl Into<String>,
    ) -> Self {
        Self {
            client: reqwest::blocking::Client::builder()
                .timeout(Duration::from_secs(120))
                .build()
                .expect("client construction"),
            base_url: base_url.into(),
            api_key,
            model: model.into(),
        }
    }

    /// Reads `HTAM_API_BASE`, `HTAM_API_KEY`, and `HTAM_EMBED_MODEL`.
    pub fn from_env() -> Result<Self, BackendError> {
        let base = std::env::var("HTAM_API_BASE")
            .map_err(|_| BackendError::ProviderFailure("HTAM_API_BASE is not set".into()))?;
        let model = std::env::var("HTAM_EMBED_MODEL")
            .map_err(|_| BackendError::ProviderFailure("HTAM_EMBED_MODEL is not set".into()))?;
        Ok(Self::new(base, std::env::var("HTAM_API_KEY").ok(), model))
    }

    fn endpoint(&self) -> String {
        let base = self.base_url.trim_end_matches('/');
        if base.ends_with("/embeddings") {
            base.to_string()
        } else {
            format!("{base}/embeddings")
        }
    }
}

impl EmbeddingProvider for HttpEmbeddingBackend {
    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, BackendError> {
        #[derive(Deserialize)]
        struct Wire {
            data: Vec<WireItem>,
        }
        #[derive(Deserialize)]
        struct WireItem {
            embedding: Vec<f64>,
        }
        let mut builder = self
            .client
            .post(self.endpoint())
            .json(&json!({"model": self.model, "input": texts}));
        if let Some(key) = &self.api_key {
            builder = builder.header("Authorization", format!("Bearer {key}"));
        }
        let resp = builder
            .send()
            .map_err(|e| BackendError::ProviderFailure(e.to_string()))?;
        if !resp.status().is_success() {
            return Err(BackendError::ProviderFailure(format!(
                "embedding endpoint returned {}",
                resp.status()
            )));
        }
        let wire: Wire = resp
            .json()
            .map_err(|e| BackendError::ProviderFailure(format!("unexpected body: {e}")))?;
        if wire.data.len() != texts.len() {
            return Err(BackendError::ProviderFailure(format!(
                "expected {} vectors, got {}",
                texts.len(),
                wire.data.len()
            )));
        }
        Ok(wire
            .data
            .into_iter()
            .map(|item| {
                let mut v = item.embedding;
                l2_normalize(&mut v);
                v
            })
            .collect())
    }
}

//! Pluggable completion and embedding providers.
//!
//! Every LLM interaction in the crate goes through [`CompletionBackend`] or
//! [`EmbeddingProvider`], so any pipeline stage can run offline against the
//! deterministic scripted mock.

mod cache;
mod embedding;
mod http;
mod scripted;

pub use cache::{cache_wrap, CachedBackend};
pub use embedding::{cosine, EmbeddingProvider, HttpEmbeddingBackend, LexicalEmbedder};
pub use http::{HttpChatBackend, PermitLimiter, RetryPolicy};
pub use scripted::{ScriptRule, ScriptedBackend};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error("rate limited after {attempts} attempts")]
    RateLimited { attempts: u32 },
    #[error("embedding provider failure: {0}")]
    ProviderFailure(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub role: Role,
    pub content: String,
}

impl Message {
    pub fn system(content: impl Into<String>) -> Self {
        Self {
            role: Role::System,
            content: content.into(),
        }
    }

    pub fn user(content: impl Into<String>) -> Self {
        Self {
            role: Role::User,
            content: content.into(),
        }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        Self {
            role: Role::Assistant,
            content: content.into(),
        }
    }
}

/// Decoding parameters for a completion call. Defaults favor
/// reproducibility: temperature 0 with a bounded token budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecodingParams {
    pub temperature: f64,
    pub max_tokens: u32,
}

impl Default for DecodingParams {
    fn default() -> Self {
        Self {
            temperature: 0.0,
            max_tokens: 2048,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionRequest {
    pub model: String,
    pub messages: Vec<Message>,
    pub temperature: f64,
    pub max_tokens: u32,
}

impl CompletionRequest {
    pub fn new(
        model: impl Into<String>,
        messages: Vec<Message>,
        params: DecodingParams,
    ) -> Result<Self, BackendError> {
        if messages.is_empty() {
            return Err(BackendError::InvalidRequest(
                "a completion request needs at least one message".into(),
            ));
        }
        if params.temperature < 0.0 {
            return Err(BackendError::InvalidRequest(format!(
                "temperature must be nonnegative, got {}",
                params.temperature
            )));
        }
        Ok(Self {
            model: model.into(),
            messages,
            temperature: params.temperature,
            max_tokens: params.max_tokens,
        })
    }

    /// Single user-message request, the common case for prompt templates.
    pub fn user(
        model: impl Into<String>,
        prompt: impl Into<String>,
        params: DecodingParams,
    ) -> Self {
        Self::new(model, vec![Message::user(prompt)], params).expect("one message present")
    }

    /// The concatenated message text, which scripted-backend matchers and
    /// cache keys operate on.
    pub fn prompt_text(&self) -> String {
        self.messages
            .iter()
            .map(|m| m.content.as_str())
            .collect::<Vec<_>>()
            .join("\n")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Usage {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
    pub total_tokens: u64,
}

impl Usage {
    pub fn add(&mut self, other: Usage) {
        self.prompt_tokens += other.prompt_tokens;
        self.completion_tokens += other.completion_tokens;
        self.total_tokens += other.total_tokens;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionResponse {
    pub text: String,
    pub usage: Usage,
    /// Transport attempts spent (0 for mocks and cache hits).
    pub attempts: u32,
    /// True when served from a response cache without a provider call.
    pub cached: bool,
}

impl CompletionResponse {
    pub fn text_only(text: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            usage: Usage::default(),
            attempts: 0,
            cached: false,
        }
    }
}

/// A completion provider. Implementations must be shareable across
/// concurrent planning runs.
pub trait CompletionBackend: Send + Sync {
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError>;
}

impl<T: CompletionBackend + ?Sized> CompletionBackend for std::sync::Arc<T> {
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        (**self).complete(request)
    }
}

impl<T: CompletionBackend + ?Sized> CompletionBackend for &T {
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        (**self).complete(request)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn request_requires_messages() {
        assert!(CompletionRequest::new("m", vec![], DecodingParams::default()).is_err());
    }

    #[test]
    fn request_rejects_negative_temperature() {
        let params = DecodingParams {
            temperature: -0.1,
            max_tokens: 16,
        };
        assert!(CompletionRequest::new("m", vec![Message::user("x")], params).is_err());
    }
}

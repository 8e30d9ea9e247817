//! Live chat-completions client: bearer auth, bounded in-flight requests,
//! and retry with exponential backoff on transient status codes.

use std::sync::{Arc, Condvar, Mutex};
use std::time::Duration;

use serde::Deserialize;
use serde_json::json;

use super::{BackendError, CompletionBackend, CompletionRequest, CompletionResponse, Usage};

/// Counting semaphore bounding concurrent provider calls.
#[derive(Debug)]
pub struct PermitLimiter {
    permits: Mutex<usize>,
    available: Condvar,
}

impl PermitLimiter {
    pub fn new(permits: usize) -> Self {
        Self {
            permits: Mutex::new(permits.max(1)),
            available: Condvar::new(),
        }
    }

    pub fn acquire(&self) -> PermitGuard<'_> {
        let mut permits = self.permits.lock().expect("limiter poisoned");
        while *permits == 0 {
            permits = self.available.wait(permits).expect("limiter poisoned");
        }
        *permits -= 1;
        PermitGuard { limiter: self }
    }
}

pub struct PermitGuard<'a> {
    limiter: &'a PermitLimiter,
}

impl Drop for PermitGuard<'_> {
    fn drop(&mut self) {
        let mut permits = self.limiter.permits.lock().expect("limiter poisoned");
        *permits += 1;
        self.limiter.available.notify_one();
    }
}

#[derive(Debug, Clone)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub backoff_base: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            max_attempts: 3,
            backoff_base: Duration::from_secs(1),
        }
    }
}

impl RetryPolicy {
    fn backoff(&self, attempt: u32) -> Duration {
        // 1x, 2x, 4x, ...
        self.backoff_base * 2u32.saturating_pow(attempt.saturating_sub(1))
    }
}

pub struct HttpChatBackend {
    client: reqwest::blocking::Client,
    base_url: String,
    api_key: Option<String>,
    retry: RetryPolicy,
    limiter: Arc<PermitLimiter>,
}

#[derive(Deserialize)]
struct WireResponse {
    choices: Vec<WireChoice>,
    #[serde(default)]
    usage: Option<WireUsage>,
}

#[derive(Deserialize)]
struct WireChoice {
    message: WireMessage,
}

#[derive(Deserialize)]
struct WireMessage {
    #[serde(default)]
    content: Option<String>,
}

#[derive(Deserialize, Default)]
struct WireUsage {
    #[serde(default)]
    prompt_tokens: u64,
    #[serde(default)]
    completion_tokens: u64,
    #[serde(default)]
    total_tokens: u64,
}

impl HttpChatBackend {
    pub fn new(base_url: impl Into<String>, api_key: Option<String>) -> Self {
        Self {
            client: reqwest::blocking::Client::builder()
                .timeout(Duration::from_secs(120))
                .build()
                .expect("client construction"),
            base_url: base_url.into(),
            api_key,
            retry: RetryPolicy::default(),
            limiter: Arc::new(PermitLimiter::new(4)),
        }
    }

    /// Reads `HTAM_API_BASE` and `HTAM_API_KEY`.
    pub fn from_env() -> Result<Self, BackendError> {
        let base = std::env::var("HTAM_API_BASE")
            .map_err(|_| BackendError::InvalidRequest("HTAM_API_BASE is not set".into()))?;
        Ok(Self::new(base, std::env::var("HTAM_API_KEY").ok()))
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    pub fn with_permits(mut self, permits: usize) -> Self {
        self.limiter = Arc::new(PermitLimiter::new(permits));
        self
    }

    fn endpoint(&self) -> String {
        let base = self.base_url.trim_end_matches('/');
        if base.ends_with("/chat/completions") {
            base.to_string()
        } else {
            format!("{base}/chat/completions")
        }
    }
}

impl CompletionBackend for HttpChatBackend {
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        let _permit = self.limiter.acquire();
        let body = json!({
            "model": request.model,
            "messages": request.messages,
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        });
        let mut attempt = 0;
        loop {
            attempt += 1;
            let mut builder = self.client.post(self.endpoint()).json(&body);
            if let Some(key) = &self.api_key {
                builder = builder.header("Authorization", format!("Bearer {key}"));
            }
            let outcome = builder.send();
            let retriable = match &outcome {
                Ok(resp) => {
                    let status = resp.status();
                    status.as_u16() == 429 || status.is_server_error()
                }
                Err(e) => e.is_timeout() || e.is_connect(),
            };
            if retriable && attempt < self.retry.max_attempts {
                std::thread::sleep(self.retry.backoff(attempt));
                continue;
            }
            let resp = outcome.map_err(|e| BackendError::Transport(e.to_string()))?;
            let status = resp.status();
            if status.as_u16() == 429 {
                return Err(BackendError::RateLimited { attempts: attempt });
            }
            if !status.is_success() {
                return Err(BackendError::Transport(format!(
                    "provider returned status {status}"
                )));
            }
            let wire: WireResponse = resp
                .json()
                .map_err(|e| BackendError::Protocol(format!("unexpected body: {e}")))?;
            let choice = wire
                .choices
                .first()
                .ok_or_else(|| BackendError::Protocol("response has no choices".into()))?;
            let text = choice
                .message
                .content
                .clone()
                .ok_or_else(|| BackendError::Protocol("choice has no content".into()))?;
            let usage = wire
                .usage
                .map(|u| Usage {
                    prompt_tokens: u.prompt_tokens,
                    completion_tokens: u.completion_tokens,
                    total_tokens: u.total_tokens,
                })
                .unwrap_or_default();
            return Ok(CompletionResponse {
                text,
                usage,
                attempts: attempt,
                cached: false,
            });
        }
    }
}

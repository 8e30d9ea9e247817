//! Read-through response cache persisted as append-only JSONL.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{BackendError, CompletionBackend, CompletionRequest, CompletionResponse};

#[derive(Debug, Serialize, Deserialize)]
struct CacheLine {
    key: String,
    value: String,
    created_at: String,
}

/// Wraps any backend with a persistent response cache. Identical requests
/// (same model, messages, and decoding parameters) are served from the store
/// without a provider call.
pub struct CachedBackend {
    inner: Arc<dyn CompletionBackend>,
    store_path: PathBuf,
    entries: Mutex<BTreeMap<String, String>>,
}

impl CachedBackend {
    pub fn wrap(
        inner: Arc<dyn CompletionBackend>,
        store_path: impl AsRef<Path>,
    ) -> Result<Self, BackendError> {
        let store_path = store_path.as_ref().to_path_buf();
        let mut entries = BTreeMap::new();
        if store_path.exists() {
            let text = std::fs::read_to_string(&store_path)
                .map_err(|e| BackendError::Transport(format!("cache read: {e}")))?;
            for line in text.lines().filter(|l| !l.trim().is_empty()) {
                let parsed: CacheLine = serde_json::from_str(line)
                    .map_err(|e| BackendError::Protocol(format!("corrupt cache line: {e}")))?;
                entries.insert(parsed.key, parsed.value);
            }
        }
        Ok(Self {
            inner,
            store_path,
            entries: Mutex::new(entries),
        })
    }

    /// SHA-256 over the canonical JSON of everything that shapes a response.
    pub fn cache_key(request: &CompletionRequest) -> String {
        let canonical = serde_json::to_string(request).expect("request serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn persist(&self, key: &str, value: &str) -> Result<(), BackendError> {
        let line = CacheLine {
            key: key.to_string(),
            value: value.to_string(),
            created_at: chrono::Utc::now().to_rfc3339(),
        };
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.store_path)
            .map_err(|e| BackendError::Transport(format!("cache open: {e}")))?;
        let mut encoded = serde_json::to_string(&line).expect("line serializes");
        encoded.push('\n');
        file.write_all(encoded.as_bytes())
            .map_err(|e| BackendError::Transport(format!("cache write: {e}")))
    }
}

/// Wraps `backend` with a JSONL-backed response cache at `store_path`.
pub fn cache_wrap(
    backend: Arc<dyn CompletionBackend>,
    store_path: impl AsRef<Path>,
) -> Result<CachedBackend, BackendError> {
    CachedBackend::wrap(backend, store_path)
}

impl CompletionBackend for CachedBackend {
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        let key = Self::cache_key(request);
        if let Some(hit) = self
            .entries
            .lock()
            .expect("cache poisoned")
            .get(&key)
            .cloned()
        {
            return Ok(CompletionResponse {
                text: hit,
                usage: Default::default(),
                attempts: 0,
                cached: true,
            });
        }
        let response = self.inner.complete(request)?;
        // Writes serialized behind the entries lock.
        let mut entries = self.entries.lock().expect("cache poisoned");
        if let std::collections::btree_map::Entry::Vacant(slot) = entries.entry(key.clone()) {
            self.persist(&key, &response.text)?;
            slot.insert(response.text.clone());
        }
        Ok(response)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::{DecodingParams, ScriptedBackend};

    fn req(prompt: &str, temperature: f64) -> CompletionRequest {
        CompletionRequest::user(
            "m",
            prompt,
            DecodingParams {
                temperature,
                max_tokens: 64,
            },
        )
    }

    #[test]
    fn second_identical_call_skips_provider() {
        let dir = tempfile::tempdir().unwrap();
        let inner = Arc::new(ScriptedBackend::new("canned"));
        let counter = Arc::clone(&inner);
        let cached = cache_wrap(inner, dir.path().join("cache.jsonl")).unwrap();
        let first = cached.complete(&req("hello", 0.0)).unwrap();
        let second = cached.complete(&req("hello", 0.0)).unwrap();
        assert_eq!(first.text, second.text);
        assert!(!first.cached);
        assert!(second.cached);
        assert_eq!(counter.calls(), 1);
    }

    #[test]
    fn decoding_params_change_the_key() {
        let a = CachedBackend::cache_key(&req("hello", 0.0));
        let b = CachedBackend::cache_key(&req("hello", 0.7));
        assert_ne!(a, b);
    }

    #[test]
    fn cached_and_uncached_sequences_agree() {
        // Cache soundness: over any request sequence against a
        // deterministic backend, the response texts are unchanged by the
        // cache layer.
        let make_backend = || {
            Arc::new(
                ScriptedBackend::new("fallback")
                    .rule(["alpha"], "response a")
                    .rule(["beta"], "response b"),
            )
        };
        let prompts = [
            "alpha one",
            "beta two",
            "alpha one",
            "gamma",
            "beta two",
            "alpha one",
        ];
        let bare = make_backend();
        let without: Vec<String> = prompts
            .iter()
            .map(|p| bare.complete(&req(p, 0.0)).unwrap().text)
            .collect();
        let dir = tempfile::tempdir().unwrap();
        let cached = cache_wrap(make_backend(), dir.path().join("cache.jsonl")).unwrap();
        let with: Vec<String> = prompts
            .iter()
            .map(|p| cached.complete(&req(p, 0.0)).unwrap().text)
            .collect();
        assert_eq!(without, with);
    }

    #[test]
    fn cold_store_passes_through_and_persists() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        {
            let cached = cache_wrap(Arc::new(ScriptedBackend::new("v1")), &path).unwrap();
            assert!(cached.is_empty());
            cached.complete(&req("q", 0.0)).unwrap();
        }
        // A fresh wrapper over a different inner backend must replay the
        // stored response.
        let replay = cache_wrap(Arc::new(ScriptedBackend::new("v2")), &path).unwrap();
        assert_eq!(replay.len(), 1);
        let resp = replay.complete(&req("q", 0.0)).unwrap();
        assert_eq!(resp.text, "v1");
        assert!(resp.cached);
    }
}

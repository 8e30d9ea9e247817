//! Tool-to-tool semantic similarity used by the substitution cost.

use std::collections::BTreeMap;
use std::sync::Mutex;

use crate::backend::{cosine, EmbeddingProvider};
use crate::graph::ToolCatalog;

/// Behavioral contract: `similarity(a, a) = 1`, symmetric, in [0, 1].
pub trait SimilarityProvider: Send + Sync {
    fn similarity(&self, tool_a: &str, tool_b: &str) -> f64;
}

/// 1 for equal names, 0 otherwise. Reduces the weighted edit distance to
/// classical Levenshtein when paired with a uniform cost model.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactMatchSimilarity;

impl SimilarityProvider for ExactMatchSimilarity {
    fn similarity(&self, tool_a: &str, tool_b: &str) -> f64 {
        if tool_a == tool_b {
            1.0
        } else {
            0.0
        }
    }
}

/// Deterministic fallback: 1 for equal names, otherwise Jaccard overlap of
/// underscore-split name tokens.
pub fn lexical_similarity(tool_a: &str, tool_b: &str) -> f64 {
    if tool_a == tool_b {
        return 1.0;
    }
    let tokens = |name: &str| -> std::collections::BTreeSet<String> {
        name.split('_')
            .filter(|t| !t.is_empty())
            .map(|t| t.to_lowercase())
            .collect()
    };
    let (a, b) = (tokens(tool_a), tokens(tool_b));
    let union = a.union(&b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(&b).count() as f64 / union as f64
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LexicalSimilarity;

impl SimilarityProvider for LexicalSimilarity {
    fn similarity(&self, tool_a: &str, tool_b: &str) -> f64 {
        lexical_similarity(tool_a, tool_b)
    }
}

/// Cosine similarity of embedded `name: description` strings, memoized per
/// unordered pair. Tools missing from the catalog embed their bare name.
/// Raw cosines are clamped to [0, 1] to honor the provider contract.
pub struct EmbeddingSimilarity<E> {
    embedder: E,
    texts: BTreeMap<String, String>,
    cache: Mutex<BTreeMap<(String, String), f64>>,
}

impl<E: EmbeddingProvider> EmbeddingSimilarity<E> {
    pub fn new(embedder: E, catalog: &ToolCatalog) -> Self {
        let texts = catalog
            .tools()
            .iter()
            .map(|t| (t.name.clone(), format!("{}: {}", t.name, t.description)))
            .collect();
        Self {
            embedder,
            texts,
            cache: Mutex::new(BTreeMap::new()),
        }
    }
}

impl<E: EmbeddingProvider> SimilarityProvider for EmbeddingSimilarity<E> {
    fn similarity(&self, tool_a: &str, tool_b: &str) -> f64 {
        if tool_a == tool_b {
            return 1.0;
        }
        let key = if tool_a <= tool_b {
            (tool_a.to_string(), tool_b.to_string())
        } else {
            (tool_b.to_string(), tool_a.to_string())
        };
        if let Some(hit) = self.cache.lock().expect("cache poisoned").get(&key) {
            return *hit;
        }
        let text = |name: &str| {
            self.texts
                .get(name)
                .cloned()
                .unwrap_or_else(|| name.to_string())
        };
        let value = match self.embedder.embed(&[text(&key.0), text(&key.1)]) {
            Ok(vs) => cosine(&vs[0], &vs[1]).max(0.0),
            // A similarity provider cannot fail mid-DP; degrade to the
            // lexical fallback.
            Err(_) => lexical_similarity(&key.0, &key.1),
        };
        self.cache
            .lock()
            .expect("cache poisoned")
            .insert(key, value);
        value
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::LexicalEmbedder;
    use crate::graph::ToolSpec;

    #[test]
    fn identical_names_are_one() {
        assert_eq!(lexical_similarity("a", "a"), 1.0);
    }

    #[test]
    fn shared_token_jaccard() {
        // {detect, ships} vs {detect, buildings}: 1 of 3 tokens shared.
        let sim = lexical_similarity("detect_ships", "detect_buildings");
        assert!((sim - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn disjoint_names_are_zero() {
        assert_eq!(lexical_similarity("web_search", "crop_image"), 0.0);
    }

    #[test]
    fn embedding_similarity_is_symmetric_and_bounded() {
        let catalog = ToolCatalog::new(vec![
            ToolSpec::new("detect_ships", "Find ships in imagery"),
            ToolSpec::new("detect_buildings", "Find buildings in imagery"),
            ToolSpec::new("web_search", "Query the public web"),
        ])
        .unwrap();
        let sim = EmbeddingSimilarity::new(LexicalEmbedder::default(), &catalog);
        let ab = sim.similarity("detect_ships", "detect_buildings");
        let ba = sim.similarity("detect_buildings", "detect_ships");
        assert_eq!(ab, ba);
        assert!((0.0..=1.0).contains(&ab));
        assert_eq!(sim.similarity("web_search", "web_search"), 1.0);
    }
}

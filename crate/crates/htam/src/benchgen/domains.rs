//! Domain constants: the seven sub-domains, their descriptions, and the
//! keyword lists used by the relevance filter.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::BenchError;

pub const DOMAINS: [&str; 7] = [
    "Agriculture & Forestry",
    "Urban & Regional Planning",
    "Environmental Monitoring & Climate Change",
    "Disaster Emergency & Management",
    "Earth Science & Resource Exploration",
    "Marine & Water Resources",
    "Defense & Security",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Complexity {
    Simple,
    Medium,
    Complex,
}

impl Complexity {
    pub const ALL: [Complexity; 3] = [Complexity::Simple, Complexity::Medium, Complexity::Complex];

    pub fn as_str(self) -> &'static str {
        match self {
            Complexity::Simple => "Simple",
            Complexity::Medium => "Medium",
            Complexity::Complex => "Complex",
        }
    }
}

impl std::fmt::Display for Complexity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Complexity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Complexity::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown complexity {s:?}"))
    }
}

/// Keyword lists per domain, lower-cased at load time. Multi-word phrases
/// are kept whole because the relevance check is substring-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DomainKeywordTable {
    map: BTreeMap<String, Vec<String>>,
}

impl DomainKeywordTable {
    pub fn new(map: BTreeMap<String, Vec<String>>) -> Result<Self, BenchError> {
        let mut lowered = BTreeMap::new();
        for (domain, keywords) in map {
            if keywords.is_empty() {
                return Err(BenchError::InvalidConfig(format!(
                    "domain {domain} has no keywords"
                )));
            }
            lowered.insert(
                domain,
                keywords.into_iter().map(|k| k.to_lowercase()).collect(),
            );
        }
        Ok(Self { map: lowered })
    }

    /// The bundled seven-domain keyword table.
    pub fn builtin() -> Self {
        let map: BTreeMap<String, Vec<String>> =
            serde_json::from_str(include_str!("../../assets/domain_keywords.json"))
                .expect("bundled keyword table is valid");
        Self::new(map).expect("bundled keyword table is nonempty")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| BenchError::InvalidConfig(format!("{}: {e}", path.as_ref().display())))?;
        let map: BTreeMap<String, Vec<String>> = serde_json::from_str(&text)
            .map_err(|e| BenchError::InvalidConfig(format!("keyword table parse error: {e}")))?;
        Self::new(map)
    }

    pub fn keywords(&self, domain: &str) -> Option<&[String]> {
        self.map.get(domain).map(Vec::as_slice)
    }

    pub fn domains(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(String::as_str)
    }
}

/// Free-text scope descriptions per domain, rendered into the dependency
/// template prompt.
pub fn builtin_domain_descriptions() -> BTreeMap<String, String> {
    serde_json::from_str(include_str!("../../assets/domain_descriptions.json"))
        .expect("bundled domain descriptions are valid")
}

//! Tool catalog: the universe of named tools a planner may draw from.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::GraphError;

/// One declared parameter of a tool.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolParam {
    pub name: String,
    #[serde(rename = "type")]
    pub param_type: String,
    #[serde(default)]
    pub required: bool,
}

/// A named tool with a description and parameter schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolSpec {
    pub name: String,
    pub description: String,
    #[serde(default)]
    pub params: Vec<ToolParam>,
}

impl ToolSpec {
    pub fn new(name: impl Into<String>, description: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            description: description.into(),
            params: Vec::new(),
        }
    }
}

/// An ordered collection of tools with unique, non-empty names.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ToolCatalog {
    tools: Vec<ToolSpec>,
}

impl ToolCatalog {
    pub fn new(tools: Vec<ToolSpec>) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        for tool in &tools {
            if tool.name.is_empty() {
                return Err(GraphError::InvalidCatalog("empty tool name".into()));
            }
            if tool.description.is_empty() {
                return Err(GraphError::InvalidCatalog(format!(
                    "tool {} has an empty description",
                    tool.name
                )));
            }
            if !seen.insert(tool.name.clone()) {
                return Err(GraphError::InvalidCatalog(format!(
                    "duplicate tool name {}",
                    tool.name
                )));
            }
        }
        Ok(Self { tools })
    }

    pub fn from_json(json: &str) -> Result<Self, GraphError> {
        let tools: Vec<ToolSpec> = serde_json::from_str(json)
            .map_err(|e| GraphError::InvalidCatalog(format!("catalog parse error: {e}")))?;
        Self::new(tools)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, GraphError> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| GraphError::InvalidCatalog(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json(&text)
    }

    pub fn tools(&self) -> &[ToolSpec] {
        &self.tools
    }

    pub fn get(&self, name: &str) -> Option<&ToolSpec> {
        self.tools.iter().find(|t| t.name == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.tools.iter().map(|t| t.name.as_str())
    }

    pub fn len(&self) -> usize {
        self.tools.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tools.is_empty()
    }

    /// Renders `name: description` lines, the form prompts embed as the
    /// available-tool listing.
    pub fn describe(&self) -> String {
        self.tools
            .iter()
            .map(|t| format!("{}: {}", t.name, t.description))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

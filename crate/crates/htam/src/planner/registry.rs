//! Sub-agent registry: which specialists exist, which layer each one works
//! in, and which tools it owns.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::graph::ToolCatalog;

use super::PlanError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubAgentSpec {
    pub name: String,
    pub layer: usize,
    pub description: String,
    pub tools: Vec<String>,
}

/// Registry file schema: `{layers, sub_agents:[{name, layer, description,
/// tools}]}`. The tool catalog is attached at load time.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RegistryFile {
    layers: usize,
    sub_agents: Vec<SubAgentSpec>,
}

#[derive(Debug, Clone)]
pub struct Registry {
    layers: usize,
    sub_agents: Vec<SubAgentSpec>,
    catalog: ToolCatalog,
}

impl Registry {
    pub fn new(
        layers: usize,
        sub_agents: Vec<SubAgentSpec>,
        catalog: ToolCatalog,
    ) -> Result<Self, PlanError> {
        if layers == 0 {
            return Err(PlanError::InvalidRegistry(
                "layer count must be >= 1".into(),
            ));
        }
        let mut names = BTreeSet::new();
        for agent in &sub_agents {
            if !names.insert(agent.name.clone()) {
                return Err(PlanError::InvalidRegistry(format!(
                    "duplicate sub-agent name {}",
                    agent.name
                )));
            }
            if agent.layer == 0 || agent.layer > layers {
                return Err(PlanError::InvalidRegistry(format!(
                    "sub-agent {} declares layer {} outside 1..={layers}",
                    agent.name, agent.layer
                )));
            }
            for tool in &agent.tools {
                if !catalog.contains(tool) {
                    return Err(PlanError::InvalidRegistry(format!(
                        "sub-agent {} owns unknown tool {tool}",
                        agent.name
                    )));
                }
            }
        }
        for layer in 1..=layers {
            if !sub_agents.iter().any(|a| a.layer == layer) {
                return Err(PlanError::InvalidRegistry(format!(
                    "layer {layer} has no sub-agents"
                )));
            }
        }
        Ok(Self {
            layers,
            sub_agents,
            catalog,
        })
    }

    pub fn from_json(json: &str, catalog: ToolCatalog) -> Result<Self, PlanError> {
        let file: RegistryFile = serde_json::from_str(json)
            .map_err(|e| PlanError::InvalidRegistry(format!("registry parse error: {e}")))?;
        Self::new(file.layers, file.sub_agents, catalog)
    }

    pub fn load(path: impl AsRef<Path>, catalog: ToolCatalog) -> Result<Self, PlanError> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| PlanError::InvalidRegistry(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json(&text, catalog)
    }

    /// The bundled EarthAgent-style registry and its tool catalog: three
    /// layers (data acquisition & preprocessing, processing & analysis,
    /// synthesis & application) populated with the stock sub-agents.
    pub fn earthagent() -> Self {
        let catalog = ToolCatalog::from_json(include_str!("../../assets/earthagent_catalog.json"))
            .expect("bundled catalog is valid");
        Self::from_json(
            include_str!("../../assets/earthagent_registry.json"),
            catalog,
        )
        .expect("bundled registry is valid")
    }

    pub fn layer_count(&self) -> usize {
        self.layers
    }

    pub fn catalog(&self) -> &ToolCatalog {
        &self.catalog
    }

    pub fn sub_agents(&self) -> &[SubAgentSpec] {
        &self.sub_agents
    }

    /// Sub-agents of one layer, in declaration order.
    pub fn layer_agents(&self, layer: usize) -> Vec<&SubAgentSpec> {
        self.sub_agents
            .iter()
            .filter(|a| a.layer == layer)
            .collect()
    }

    pub fn get(&self, name: &str) -> Option<&SubAgentSpec> {
        self.sub_agents.iter().find(|a| a.name == name)
    }

    /// Case-insensitive lookup within one layer, returning the registered
    /// spelling. Model outputs routinely vary the casing of agent names.
    pub fn resolve_in_layer(&self, layer: usize, name: &str) -> Option<&SubAgentSpec> {
        let lowered = name.trim().to_lowercase();
        self.sub_agents
            .iter()
            .find(|a| a.layer == layer && a.name.to_lowercase() == lowered)
    }
}

//! Planners. The hierarchical planner selects sub-agents top-down across
//! registry layers, then assembles the plan bottom-up; the baselines (CoT,
//! ReAct, Plan&Execute, Debate) share the same backend and plan shape.

mod baselines;
pub mod parse;
mod plan;
mod registry;

pub use baselines::{plan_cot, plan_debate, plan_plan_execute, plan_react, DebateSchedule};
pub use parse::{parse_tool_list, NoListFound, ParsedToolList};
pub use plan::{Architecture, ParamMap, Plan, PlanStep, TraceEntry};
pub use registry::{Registry, SubAgentSpec};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backend::{BackendError, CompletionBackend, CompletionRequest, DecodingParams};
use crate::prompts;

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("unparseable selection: {0}")]
    UnparseableSelection(String),
    #[error("layer {layer} selection is empty")]
    EmptySelection { layer: usize },
    #[error("planning failed: {0}")]
    PlanningFailed(#[from] BackendError),
    #[error("invalid registry: {0}")]
    InvalidRegistry(String),
    #[error("invalid planner configuration: {0}")]
    InvalidConfig(String),
}

/// Knobs shared by every planner. Defaults favor reproducibility and match
/// the published setups: greedy decoding, a 10-step ReAct cap, three
/// debaters with two free-debate rounds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlannerConfig {
    pub model: String,
    #[serde(default)]
    pub params: DecodingParams,
    pub react_max_steps: usize,
    pub debaters: usize,
    pub debate_schedule: DebateSchedule,
    /// Per-layer caps on how many sub-agents a selection may keep. Unset
    /// layers use the built-in defaults (top layer 1, bottom layer 2 in a
    /// three-layer registry, otherwise 3).
    #[serde(default)]
    pub layer_selection_caps: BTreeMap<usize, usize>,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            model: String::new(),
            params: DecodingParams::default(),
            react_max_steps: 10,
            debaters: 3,
            debate_schedule: DebateSchedule::default(),
            layer_selection_caps: BTreeMap::new(),
        }
    }
}

impl PlannerConfig {
    fn selection_cap(&self, layer: usize, layer_count: usize) -> usize {
        if let Some(cap) = self.layer_selection_caps.get(&layer) {
            return (*cap).max(1);
        }
        if layer == layer_count {
            1
        } else if layer_count == 3 && layer == 1 {
            2
        } else {
            3
        }
    }
}

/// One layer's chosen sub-agents with their delegated subtasks, in the
/// order the policy returned them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selection {
    pub layer: usize,
    pub chosen: Vec<(String, String)>,
}

fn agents_info(registry: &Registry, layer: usize) -> String {
    registry
        .layer_agents(layer)
        .iter()
        .map(|a| {
            format!(
                "{}: {} (tools: {})",
                a.name,
                a.description,
                a.tools.join(", ")
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn selection_for(selections: &[Selection], layer: usize) -> Option<&Selection> {
    selections.iter().find(|s| s.layer == layer)
}

fn render_layer_prompt(
    query: &str,
    layer: usize,
    higher_selections: &[Selection],
    registry: &Registry,
) -> String {
    let layer_count = registry.layer_count();
    let info = agents_info(registry, layer);
    let layer_str = layer.to_string();
    if layer_count == 3 {
        match layer {
            3 => prompts::render(
                prompts::LAYER_TOP,
                &[("agents_info", &info), ("query", query)],
            ),
            2 => {
                let top = selection_for(higher_selections, 3);
                let (agent, subtask) = top
                    .and_then(|s| s.chosen.first())
                    .map(|(a, t)| (a.as_str(), t.as_str()))
                    .unwrap_or(("", ""));
                prompts::render(
                    prompts::LAYER_MID,
                    &[
                        ("agents_info", &info),
                        ("query", query),
                        ("layer3_agent", agent),
                        ("layer3_subtask", subtask),
                    ],
                )
            }
            _ => {
                let mid = selection_for(higher_selections, 2);
                let layer2_info = mid
                    .map(|s| {
                        s.chosen
                            .iter()
                            .map(|(a, t)| format!("{a}: {t}"))
                            .collect::<Vec<_>>()
                            .join("; ")
                    })
                    .unwrap_or_default();
                let top = selection_for(higher_selections, 3);
                let layer3_agent = top
                    .and_then(|s| s.chosen.first())
                    .map(|(a, _)| a.as_str())
                    .unwrap_or("");
                prompts::render(
                    prompts::LAYER_BOTTOM,
                    &[
                        ("agents_info", &info),
                        ("query", query),
                        ("layer2_info", &layer2_info),
                        ("layer3_agent", layer3_agent),
                    ],
                )
            }
        }
    } else if layer == layer_count {
        prompts::render(
            prompts::LAYER_GENERIC_TOP,
            &[
                ("layer", &layer_str),
                ("agents_info", &info),
                ("query", query),
            ],
        )
    } else {
        let higher_info = higher_selections
            .iter()
            .map(|s| {
                let agents = s
                    .chosen
                    .iter()
                    .map(|(a, t)| format!("{a}: {t}"))
                    .collect::<Vec<_>>()
                    .join("; ");
                format!("layer {}: {agents}", s.layer)
            })
            .collect::<Vec<_>>()
            .join("\n");
        prompts::render(
            prompts::LAYER_GENERIC_MULTI,
            &[
                ("layer", &layer_str),
                ("agents_info", &info),
                ("query", query),
                ("higher_info", &higher_info),
            ],
        )
    }
}

/// Parses a selection reply: either `{"selected_agents": [{name, subtask}]}`
/// or the single-choice `{"selected_agent", "subtask"}` shape.
fn parse_selection(text: &str) -> Result<Vec<(String, String)>, PlanError> {
    let value = parse::extract_first_json(text)
        .ok_or_else(|| PlanError::UnparseableSelection(format!("no JSON in reply: {text:?}")))?;
    if let Some(list) = value.get("selected_agents").and_then(|v| v.as_array()) {
        let mut chosen = Vec::new();
        for item in list {
            let name = item
                .get("name")
                .or_else(|| item.get("selected_agent"))
                .and_then(|v| v.as_str())
                .ok_or_else(|| {
                    PlanError::UnparseableSelection("selection entry without a name".into())
                })?;
            let subtask = item
                .get("subtask")
                .and_then(|v| v.as_str())
                .unwrap_or_default();
            chosen.push((name.to_string(), subtask.to_string()));
        }
        return Ok(chosen);
    }
    if let Some(name) = value.get("selected_agent").and_then(|v| v.as_str()) {
        let subtask = value
            .get("subtask")
            .and_then(|v| v.as_str())
            .unwrap_or_default();
        return Ok(vec![(name.to_string(), subtask.to_string())]);
    }
    Err(PlanError::UnparseableSelection(format!(
        "reply carries no selection: {text:?}"
    )))
}

/// Policy call for one layer: renders that layer's prompt conditioned on
/// all higher-layer selections, parses the reply, drops unregistered
/// sub-agents, and clamps to the layer's selection cap.
pub fn select_layer(
    query: &str,
    layer: usize,
    higher_selections: &[Selection],
    registry: &Registry,
    backend: &dyn CompletionBackend,
    config: &PlannerConfig,
) -> Result<(Selection, TraceEntry), PlanError> {
    let prompt = render_layer_prompt(query, layer, higher_selections, registry);
    let request = CompletionRequest::user(&config.model, prompt.clone(), config.params);
    let response = backend.complete(&request)?;
    let mut entry = TraceEntry::new("select_layer", prompt, response.text.clone());
    entry.layer = Some(layer);

    let raw = parse_selection(&response.text)?;
    let cap = config.selection_cap(layer, registry.layer_count());
    let mut chosen = Vec::new();
    for (name, subtask) in raw {
        match registry.resolve_in_layer(layer, &name) {
            Some(agent) if chosen.len() < cap => {
                chosen.push((agent.name.clone(), subtask));
            }
            Some(_) => entry.rejects.push(format!("{name} (over layer cap)")),
            None => entry.rejects.push(name),
        }
    }
    if chosen.is_empty() {
        return Err(PlanError::EmptySelection { layer });
    }
    Ok((Selection { layer, chosen }, entry))
}

/// Splits a raw tool list into steps owned by `allowed` and rejects.
fn scope_tools(names: Vec<String>, allowed: &[String]) -> (Vec<String>, Vec<String>) {
    let mut kept = Vec::new();
    let mut rejects = Vec::new();
    for name in names {
        if allowed.contains(&name) {
            kept.push(name);
        } else {
            rejects.push(name);
        }
    }
    (kept, rejects)
}

/// Hierarchical planning: top-down sub-agent selection from layer L to 1,
/// then bottom-up plan assembly. Every chosen sub-agent gets one scoped
/// backend call constrained to its own tool list, so all layer-1 steps
/// precede layer-2 steps, and so on.
pub fn plan_htam(
    query: &str,
    registry: &Registry,
    backend: &dyn CompletionBackend,
    config: &PlannerConfig,
) -> Result<Plan, PlanError> {
    let mut plan = Plan::new(Architecture::Htam);
    let layer_count = registry.layer_count();

    // Top-down pass: each layer's policy sees the selections above it.
    let mut selections: Vec<Selection> = Vec::new();
    for layer in (1..=layer_count).rev() {
        let (selection, entry) =
            select_layer(query, layer, &selections, registry, backend, config)?;
        plan.trace.push(entry);
        selections.push(selection);
    }

    // Bottom-up pass: ask each chosen sub-agent which of its tools to run.
    for layer in 1..=layer_count {
        let selection = selection_for(&selections, layer).expect("every layer selected");
        for (agent_name, subtask) in &selection.chosen {
            let agent = registry.get(agent_name).expect("selection is registered");
            let tools_info = agent
                .tools
                .iter()
                .map(|t| {
                    let description = registry
                        .catalog()
                        .get(t)
                        .map(|spec| spec.description.clone())
                        .unwrap_or_default();
                    format!("{t}: {description}")
                })
                .collect::<Vec<_>>()
                .join("\n");
            let prompt = prompts::render(
                prompts::SUBAGENT_TOOLS,
                &[
                    ("agent_name", agent_name.as_str()),
                    ("subtask", subtask.as_str()),
                    ("query", query),
                    ("tools_info", &tools_info),
                ],
            );
            let request = CompletionRequest::user(&config.model, prompt.clone(), config.params);
            let response = backend.complete(&request)?;
            let mut entry = TraceEntry::new("select_tools", prompt, response.text.clone());
            entry.layer = Some(layer);
            entry.agent = Some(agent_name.clone());
            match parse::extract_name_list(&response.text) {
                Some(names) => {
                    let (kept, rejects) = scope_tools(names, &agent.tools);
                    entry.tools_added = kept.clone();
                    entry.rejects = rejects;
                    plan.steps.extend(kept.into_iter().map(PlanStep::bare));
                }
                None => entry
                    .rejects
                    .push(format!("unparseable: {}", response.text)),
            }
            plan.trace.push(entry);
        }
    }
    if plan.steps.is_empty() {
        plan.flags.push("empty_plan".into());
    }
    Ok(plan)
}

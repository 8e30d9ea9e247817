//! Baseline planners: chain-of-thought, ReAct with imagined observations,
//! Plan&Execute, and multi-agent debate.

use serde::{Deserialize, Serialize};

use crate::backend::{CompletionBackend, CompletionRequest};
use crate::graph::ToolCatalog;
use crate::prompts;

use super::parse::{extract_first_json, extract_name_list};
use super::plan::{Architecture, ParamMap, Plan, PlanStep, TraceEntry};
use super::{PlanError, PlannerConfig};

fn ask(
    backend: &dyn CompletionBackend,
    config: &PlannerConfig,
    prompt: &str,
) -> Result<String, PlanError> {
    let request = CompletionRequest::user(&config.model, prompt, config.params);
    Ok(backend.complete(&request)?.text)
}

fn split_catalog(names: Vec<String>, catalog: &ToolCatalog) -> (Vec<String>, Vec<String>) {
    let mut kept = Vec::new();
    let mut rejects = Vec::new();
    for name in names {
        if catalog.contains(&name) {
            kept.push(name);
        } else {
            rejects.push(name);
        }
    }
    (kept, rejects)
}

/// Single chain-of-thought completion parsed as `stepN:thought;tool_name`
/// lines. Catalog tools become steps in order, duplicates preserved;
/// free-text "tools" are quarantined in the trace.
pub fn plan_cot(
    query: &str,
    catalog: &ToolCatalog,
    backend: &dyn CompletionBackend,
    config: &PlannerConfig,
) -> Result<Plan, PlanError> {
    let prompt = prompts::render(
        prompts::COT,
        &[("query", query), ("tools_info", &catalog.describe())],
    );
    let response = ask(backend, config, &prompt)?;

    let mut plan = Plan::new(Architecture::Cot);
    let mut entry = TraceEntry::new("cot", prompt, response.clone());
    let mut saw_step_line = false;
    for line in response.lines() {
        let line = line.trim();
        let lowered = line.to_lowercase();
        if !lowered.starts_with("step") {
            continue;
        }
        let Some(colon) = line.find(':') else {
            continue;
        };
        saw_step_line = true;
        let body = &line[colon + 1..];
        // The tool name is the segment after the last semicolon.
        let tool = body.rsplit(';').next().unwrap_or("").trim();
        if tool.is_empty() {
            continue;
        }
        if catalog.contains(tool) {
            entry.tools_added.push(tool.to_string());
            plan.steps.push(PlanStep::bare(tool));
        } else {
            entry.rejects.push(tool.to_string());
        }
    }
    if !saw_step_line {
        return Err(PlanError::UnparseableSelection(format!(
            "no step lines in CoT output: {response:?}"
        )));
    }
    plan.trace.push(entry);
    if plan.steps.is_empty() {
        plan.flags.push("empty_plan".into());
    }
    Ok(plan)
}

#[derive(Debug, Deserialize)]
struct ReactAction {
    tool: String,
    #[serde(default)]
    parameters: Option<ParamMap>,
}

fn parse_react_action(text: &str) -> Option<ReactAction> {
    let trimmed = text.trim();
    if trimmed.eq_ignore_ascii_case("finish") {
        return None;
    }
    let value = extract_first_json(text)?;
    serde_json::from_value(value).ok()
}

/// Iterative thought → action → imagined-observation loop. The loop ends
/// when the model declines to act (its FINISH outcome) or after
/// `react_max_steps` accepted actions; transport errors end it with a
/// partial plan rather than failing.
pub fn plan_react(
    query: &str,
    catalog: &ToolCatalog,
    backend: &dyn CompletionBackend,
    config: &PlannerConfig,
) -> Result<Plan, PlanError> {
    if config.react_max_steps == 0 {
        return Err(PlanError::InvalidConfig(
            "react_max_steps must be >= 1".into(),
        ));
    }
    let system_prompt =
        "You are an intelligent assistant that needs to solve user problems based on the tools provided.";
    let tools_info = catalog.describe();
    let mut plan = Plan::new(Architecture::React);
    let mut history = String::new();
    let mut previous_tool_calls: Vec<String> = Vec::new();

    // One turn = one thought/action exchange; rejected actions still spend
    // their turn, so the loop always terminates.
    for _turn in 0..config.react_max_steps {
        let previous = format!("[{}]", previous_tool_calls.join(", "));
        let thought_prompt = prompts::render(
            prompts::REACT_THOUGHT,
            &[
                ("system_prompt", system_prompt),
                ("tools_info", &tools_info),
                ("query", query),
                ("history", &history),
                ("previous_tool_calls", &previous),
            ],
        );
        let thought = match ask(backend, config, &thought_prompt) {
            Ok(text) => text,
            Err(_) => {
                plan.flags.push("transport_error".into());
                break;
            }
        };
        plan.trace.push(TraceEntry::new(
            "react_thought",
            thought_prompt,
            thought.clone(),
        ));

        let action_prompt = prompts::render(
            prompts::REACT_ACTION,
            &[
                ("query", query),
                ("thought", &thought),
                ("history", &history),
                ("previous_tool_calls", &previous),
            ],
        );
        let action_text = match ask(backend, config, &action_prompt) {
            Ok(text) => text,
            Err(_) => {
                plan.flags.push("transport_error".into());
                break;
            }
        };
        let mut action_entry = TraceEntry::new("react_action", action_prompt, action_text.clone());

        let Some(action) = parse_react_action(&action_text) else {
            plan.trace.push(action_entry);
            if plan.steps.is_empty() {
                plan.flags.push("finished_without_action".into());
            }
            break;
        };
        if !catalog.contains(&action.tool) {
            action_entry.rejects.push(action.tool.clone());
            plan.trace.push(action_entry);
            history.push_str(&format!(
                "Action: {} (rejected: unknown tool)\n",
                action.tool
            ));
            continue;
        }
        action_entry.tools_added.push(action.tool.clone());
        plan.trace.push(action_entry);

        let args = action
            .parameters
            .as_ref()
            .map(|p| serde_json::to_string(p).unwrap_or_default())
            .unwrap_or_else(|| "{}".into());
        let description = catalog
            .get(&action.tool)
            .map(|t| t.description.clone())
            .unwrap_or_default();
        let observation_prompt = prompts::render(
            prompts::REACT_OBSERVATION,
            &[
                ("thought", &thought),
                ("tool_name", &action.tool),
                ("tool_description", &description),
                ("args", &args),
            ],
        );
        let observation = match ask(backend, config, &observation_prompt) {
            Ok(text) => text,
            Err(_) => {
                plan.flags.push("transport_error".into());
                plan.steps.push(PlanStep {
                    tool: action.tool.clone(),
                    params: action.parameters.clone(),
                });
                break;
            }
        };
        plan.trace.push(TraceEntry::new(
            "react_observation",
            observation_prompt,
            observation.clone(),
        ));

        history.push_str(&format!(
            "Thought: {thought}\nAction: {} {args}\nObservation: {observation}\n",
            action.tool
        ));
        previous_tool_calls.push(action.tool.clone());
        plan.steps.push(PlanStep {
            tool: action.tool,
            params: action.parameters,
        });
    }
    Ok(plan)
}

/// One-shot planning: a single completion parsed as
/// `{"plan": [{tool, parameters}, ...]}`, executed without revision.
pub fn plan_plan_execute(
    query: &str,
    catalog: &ToolCatalog,
    backend: &dyn CompletionBackend,
    config: &PlannerConfig,
) -> Result<Plan, PlanError> {
    let prompt = prompts::render(
        prompts::PLAN_EXECUTE,
        &[("tools_info", &catalog.describe()), ("query", query)],
    );
    let response = ask(backend, config, &prompt)?;
    let value = extract_first_json(&response).ok_or_else(|| {
        PlanError::UnparseableSelection(format!("no JSON in plan output: {response:?}"))
    })?;
    let steps = value
        .get("plan")
        .and_then(|v| v.as_array())
        .ok_or_else(|| PlanError::UnparseableSelection("missing plan array".into()))?;

    let mut plan = Plan::new(Architecture::PlanExecute);
    let mut entry = TraceEntry::new("plan_execute", prompt, response.clone());
    for step in steps {
        let Some(tool) = step.get("tool").and_then(|v| v.as_str()) else {
            entry.rejects.push(step.to_string());
            continue;
        };
        let params: Option<ParamMap> = step
            .get("parameters")
            .and_then(|v| serde_json::from_value(v.clone()).ok());
        if catalog.contains(tool) {
            entry.tools_added.push(tool.to_string());
            plan.steps.push(PlanStep {
                tool: tool.to_string(),
                params,
            });
        } else {
            entry.rejects.push(tool.to_string());
        }
    }
    plan.trace.push(entry);
    if plan.steps.is_empty() {
        plan.flags.push("empty_plan".into());
    }
    Ok(plan)
}

/// Debate round structure: one round of opening statements, `free_rounds`
/// rounds of free debate, one concluding judge round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DebateSchedule {
    pub opening_rounds: usize,
    pub free_rounds: usize,
    pub judge_rounds: usize,
}

impl Default for DebateSchedule {
    fn default() -> Self {
        Self {
            opening_rounds: 1,
            free_rounds: 2,
            judge_rounds: 1,
        }
    }
}

impl DebateSchedule {
    pub fn new(opening_rounds: usize, free_rounds: usize, judge_rounds: usize) -> Self {
        Self {
            opening_rounds,
            free_rounds,
            judge_rounds,
        }
    }

    /// Total backend calls for `m` debaters: `m × (1 + free_rounds) + 1`.
    pub fn call_count(&self, debaters: usize) -> usize {
        debaters * (1 + self.free_rounds) + 1
    }
}

fn trajectory_text(trajectory: &[String]) -> String {
    format!(
        "[{}]",
        trajectory
            .iter()
            .map(|t| format!("'{t}'"))
            .collect::<Vec<_>>()
            .join(",")
    )
}

/// Multi-agent debate: independent openers, free-debate revisions over the
/// full shared history, then a judge synthesizing the final trajectory.
/// Per-debater parse failures fall back to that debater's previous answer;
/// an unparseable judge reply is fatal.
pub fn plan_debate(
    query: &str,
    catalog: &ToolCatalog,
    backend: &dyn CompletionBackend,
    config: &PlannerConfig,
) -> Result<Plan, PlanError> {
    let debaters = config.debaters;
    if debaters < 2 {
        return Err(PlanError::InvalidConfig(format!(
            "debate needs at least 2 debaters, got {debaters}"
        )));
    }
    let schedule = config.debate_schedule;
    if schedule.opening_rounds != 1 || schedule.judge_rounds != 1 {
        return Err(PlanError::InvalidConfig(
            "debate runs exactly one opening round and one judge round".into(),
        ));
    }
    let tools_info = catalog.describe();
    let mut plan = Plan::new(Architecture::Debate);

    // Round 0: independent opening statements.
    let mut answers: Vec<Vec<String>> = Vec::with_capacity(debaters);
    let mut history = String::new();
    let opening_prompt = prompts::render(
        prompts::DEBATE_OPENING,
        &[("question", query), ("tools_info", &tools_info)],
    );
    for debater in 1..=debaters {
        let response = ask(backend, config, &opening_prompt)?;
        let mut entry = TraceEntry::new("debate_opening", opening_prompt.clone(), response.clone());
        entry.agent = Some(format!("debater_{debater}"));
        let trajectory = extract_name_list(&response).unwrap_or_default();
        if trajectory.is_empty() {
            entry.rejects.push("unparseable opening".into());
        }
        history.push_str(&format!(
            "Round 0 - Debater {debater}: {}\n",
            trajectory_text(&trajectory)
        ));
        answers.push(trajectory);
        plan.trace.push(entry);
    }

    // Rounds 1..=N-1: free debate over the shared history.
    for round in 1..=schedule.free_rounds {
        let snapshot = history.clone();
        for debater in 1..=debaters {
            let former = trajectory_text(&answers[debater - 1]);
            let prompt = prompts::render(
                prompts::DEBATE_ROUND,
                &[
                    ("debater_index", &debater.to_string()),
                    ("question", query),
                    ("former_response", &former),
                    ("tools_info", &tools_info),
                    ("history_str", &snapshot),
                ],
            );
            let response = ask(backend, config, &prompt)?;
            let mut entry = TraceEntry::new("debate_round", prompt, response.clone());
            entry.agent = Some(format!("debater_{debater}"));
            match extract_name_list(&response) {
                Some(trajectory) if !trajectory.is_empty() => {
                    answers[debater - 1] = trajectory;
                }
                // Keep the previous round's answer on parse failure.
                _ => entry.rejects.push("unparseable revision".into()),
            }
            history.push_str(&format!(
                "Round {round} - Debater {debater}: {}\n",
                trajectory_text(&answers[debater - 1])
            ));
            plan.trace.push(entry);
        }
    }

    // Final round: the judge synthesizes one trajectory.
    let judge_prompt = prompts::render(
        prompts::DEBATE_JUDGE,
        &[
            ("question", query),
            ("tools_info", &tools_info),
            ("history_str", &history),
        ],
    );
    let response = ask(backend, config, &judge_prompt)?;
    let mut entry = TraceEntry::new("debate_judge", judge_prompt, response.clone());
    let final_trajectory = extract_first_json(&response)
        .and_then(|v| {
            v.get("final_tool_trajectory").and_then(|list| {
                list.as_array().map(|items| {
                    items
                        .iter()
                        .filter_map(|item| item.as_str().map(|s| s.to_string()))
                        .collect::<Vec<_>>()
                })
            })
        })
        .ok_or_else(|| {
            PlanError::UnparseableSelection(format!("judge reply unusable: {response:?}"))
        })?;
    let (kept, rejects) = split_catalog(final_trajectory, catalog);
    entry.tools_added = kept.clone();
    entry.rejects = rejects;
    plan.trace.push(entry);
    plan.steps = kept.into_iter().map(PlanStep::bare).collect();
    if plan.steps.is_empty() {
        plan.flags.push("empty_plan".into());
    }
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::ScriptedBackend;
    use crate::graph::ToolSpec;

    fn catalog() -> ToolCatalog {
        ToolCatalog::new(vec![
            ToolSpec::new("a", "tool a"),
            ToolSpec::new("b", "tool b"),
            ToolSpec::new("c", "tool c"),
        ])
        .unwrap()
    }

    fn config() -> PlannerConfig {
        PlannerConfig::default()
    }

    #[test]
    fn cot_parses_well_formed_steps() {
        let backend =
            ScriptedBackend::new("step1:look around;a\nstep2:check data;b\nstep3:wrap up;c");
        let plan = plan_cot("q", &catalog(), &backend, &config()).unwrap();
        assert_eq!(plan.tool_sequence(), vec!["a", "b", "c"]);
        assert_eq!(plan.architecture, Architecture::Cot);
    }

    #[test]
    fn cot_quarantines_free_text_steps() {
        let backend = ScriptedBackend::new(
            "step1:search;a\nstep2:download;I will download the dataset for analysis\nstep3:done;b",
        );
        let plan = plan_cot("q", &catalog(), &backend, &config()).unwrap();
        assert_eq!(plan.tool_sequence(), vec!["a", "b"]);
        assert_eq!(
            plan.trace[0].rejects,
            vec!["I will download the dataset for analysis"]
        );
    }

    #[test]
    fn cot_rejects_output_without_steps() {
        let backend = ScriptedBackend::new("");
        assert!(matches!(
            plan_cot("q", &catalog(), &backend, &config()),
            Err(PlanError::UnparseableSelection(_))
        ));
    }

    #[test]
    fn react_immediate_finish_is_flagged() {
        let backend =
            ScriptedBackend::new("Thought: done").rule(["decide the next action"], "FINISH");
        let plan = plan_react("q", &catalog(), &backend, &config()).unwrap();
        assert!(plan.steps.is_empty());
        assert!(plan.flags.contains(&"finished_without_action".to_string()));
    }

    #[test]
    fn react_three_actions_then_finish() {
        let backend = ScriptedBackend::new("Thought: keep going")
            .rule(
                ["decide the next action", "previous_tool_calls: [a, b, c]"],
                "FINISH",
            )
            .rule(
                ["decide the next action", "previous_tool_calls: [a, b]"],
                r#"{"tool": "c", "parameters": {}}"#,
            )
            .rule(
                ["decide the next action", "previous_tool_calls: [a]"],
                r#"{"tool": "b", "parameters": {}}"#,
            )
            .rule(
                ["decide the next action"],
                r#"{"tool": "a", "parameters": {"x": 1}}"#,
            )
            .rule(["fully imagine"], "The tool ran and produced useful data.");
        let plan = plan_react("q", &catalog(), &backend, &config()).unwrap();
        assert_eq!(plan.tool_sequence(), vec!["a", "b", "c"]);
        let observations = plan
            .trace
            .iter()
            .filter(|t| t.stage == "react_observation")
            .count();
        assert_eq!(observations, 3);
    }

    #[test]
    fn react_repetition_capped_at_max_steps() {
        let backend = ScriptedBackend::new("Thought: again")
            .rule(
                ["decide the next action"],
                r#"{"tool": "a", "parameters": {}}"#,
            )
            .rule(["fully imagine"], "Did the thing.");
        let plan = plan_react("q", &catalog(), &backend, &config()).unwrap();
        assert_eq!(plan.steps.len(), 10);
    }

    #[test]
    fn plan_execute_parses_four_steps() {
        let reply = r#"{"plan": [
            {"tool": "a", "parameters": {"p": "1"}},
            {"tool": "b", "parameters": {}},
            {"tool": "c", "parameters": {}},
            {"tool": "a", "parameters": {}}
        ]}"#;
        let backend = ScriptedBackend::new(reply);
        let plan = plan_plan_execute("q", &catalog(), &backend, &config()).unwrap();
        assert_eq!(plan.tool_sequence(), vec!["a", "b", "c", "a"]);
        assert!(plan.steps[0].params.is_some());
    }

    #[test]
    fn plan_execute_salvages_json_from_prose() {
        let reply = r#"Sure! Here is the plan you asked for:
            {"plan": [{"tool": "b", "parameters": {}}]}
            Let me know if you need anything else."#;
        let backend = ScriptedBackend::new(reply);
        let plan = plan_plan_execute("q", &catalog(), &backend, &config()).unwrap();
        assert_eq!(plan.tool_sequence(), vec!["b"]);
    }

    #[test]
    fn plan_execute_rejects_malformed_output() {
        let backend = ScriptedBackend::new("no json here at all");
        assert!(matches!(
            plan_plan_execute("q", &catalog(), &backend, &config()),
            Err(PlanError::UnparseableSelection(_))
        ));
    }

    #[test]
    fn debate_degenerate_schedule_echoes_opener() {
        let mut cfg = config();
        cfg.debaters = 2;
        cfg.debate_schedule = DebateSchedule::new(1, 0, 1);
        let backend =
            ScriptedBackend::new(r#"{"plan": "open", "initial_tool_trajectory": ["a", "b"]}"#)
                .rule(
                    ["judge/summarizer"],
                    r#"{"final_tool_trajectory": ["a", "b"]}"#,
                );
        let plan = plan_debate("q", &catalog(), &backend, &cfg).unwrap();
        assert_eq!(plan.tool_sequence(), vec!["a", "b"]);
        assert_eq!(plan.backend_calls(), 3, "2 openers + 1 judge");
    }

    #[test]
    fn debate_three_debaters_default_schedule_makes_ten_calls() {
        let backend = ScriptedBackend::new(r#"{"plan": "p", "initial_tool_trajectory": ["a"]}"#)
            .rule(
                ["multi-agent debate. You have seen"],
                r#"{"advice": "add b", "refined_tool_trajectory": ["a", "b"]}"#,
            )
            .rule(
                ["judge/summarizer"],
                r#"{"final_tool_trajectory": ["a", "b"]}"#,
            );
        let plan = plan_debate("q", &catalog(), &backend, &config()).unwrap();
        assert_eq!(plan.backend_calls(), 10, "3 + 3x2 + 1");
        assert_eq!(backend.calls(), 10);
        assert_eq!(plan.tool_sequence(), vec!["a", "b"]);
    }

    #[test]
    fn debate_judge_output_parsed_verbatim_and_filtered() {
        let backend = ScriptedBackend::new(r#"{"plan": "p", "initial_tool_trajectory": ["a"]}"#)
            .rule(
                ["multi-agent debate. You have seen"],
                r#"{"advice": "", "refined_tool_trajectory": ["a"]}"#,
            )
            .rule(
                ["judge/summarizer"],
                r#"{"final_tool_trajectory": ["b", "made_up_tool", "a"]}"#,
            );
        let plan = plan_debate("q", &catalog(), &backend, &config()).unwrap();
        assert_eq!(plan.tool_sequence(), vec!["b", "a"]);
        let judge_entry = plan.trace.last().unwrap();
        assert_eq!(judge_entry.rejects, vec!["made_up_tool"]);
    }

    #[test]
    fn debate_unparseable_judge_is_fatal() {
        let backend = ScriptedBackend::new(r#"{"plan": "p", "initial_tool_trajectory": ["a"]}"#)
            .rule(["judge/summarizer"], "I refuse to answer in JSON");
        let err = plan_debate("q", &catalog(), &backend, &config()).unwrap_err();
        assert!(matches!(err, PlanError::UnparseableSelection(_)));
    }

    #[test]
    fn debate_call_count_formula_holds_across_schedules() {
        for debaters in 2..=4 {
            for free_rounds in 0..=3 {
                let backend =
                    ScriptedBackend::new(r#"{"plan": "p", "initial_tool_trajectory": ["a"]}"#)
                        .rule(
                            ["You have seen all previous responses"],
                            r#"{"refined_tool_trajectory": ["a"]}"#,
                        )
                        .rule(["judge/summarizer"], r#"{"final_tool_trajectory": ["a"]}"#);
                let mut cfg = config();
                cfg.debaters = debaters;
                cfg.debate_schedule = DebateSchedule::new(1, free_rounds, 1);
                plan_debate("q", &catalog(), &backend, &cfg).unwrap();
                assert_eq!(
                    backend.calls(),
                    debaters * (1 + free_rounds) + 1,
                    "m={debaters}, free={free_rounds}"
                );
                assert_eq!(backend.calls(), cfg.debate_schedule.call_count(debaters));
            }
        }
    }

    #[test]
    fn debate_requires_two_debaters() {
        let mut cfg = config();
        cfg.debaters = 1;
        let backend = ScriptedBackend::new("{}");
        assert!(matches!(
            plan_debate("q", &catalog(), &backend, &cfg),
            Err(PlanError::InvalidConfig(_))
        ));
    }
}

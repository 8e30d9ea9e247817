//! Prompt templates, bundled as text assets. Placeholders use `{name}`
//! syntax; [`render`] substitutes only the provided names, leaving literal
//! braces (JSON examples in the templates) untouched.

pub const DAG_TEMPLATE: &str = include_str!("../assets/prompts/dag_template.txt");
pub const PARAMETERIZE_FLOW: &str = include_str!("../assets/prompts/parameterize_flow.txt");
pub const GENERATE_TASK: &str = include_str!("../assets/prompts/generate_task.txt");
pub const KEY_STEPS_EXTRACTION: &str = include_str!("../assets/prompts/key_steps.txt");
pub const KEY_TOOLS_EXTRACTION: &str = include_str!("../assets/prompts/key_tools.txt");
pub const COMPLETENESS_EVALUATION: &str = include_str!("../assets/prompts/completeness.txt");
pub const COT: &str = include_str!("../assets/prompts/cot.txt");
pub const PLAN_EXECUTE: &str = include_str!("../assets/prompts/plan_execute.txt");
pub const REACT_THOUGHT: &str = include_str!("../assets/prompts/react_thought.txt");
pub const REACT_ACTION: &str = include_str!("../assets/prompts/react_action.txt");
pub const REACT_OBSERVATION: &str = include_str!("../assets/prompts/react_observation.txt");
pub const DEBATE_OPENING: &str = include_str!("../assets/prompts/debate_opening.txt");
pub const DEBATE_ROUND: &str = include_str!("../assets/prompts/debate_round.txt");
pub const DEBATE_JUDGE: &str = include_str!("../assets/prompts/debate_judge.txt");
pub const LAYER_TOP: &str = include_str!("../assets/prompts/layer_top.txt");
pub const LAYER_MID: &str = include_str!("../assets/prompts/layer_mid.txt");
pub const LAYER_BOTTOM: &str = include_str!("../assets/prompts/layer_bottom.txt");
pub const LAYER_GENERIC_TOP: &str = include_str!("../assets/prompts/layer_generic_top.txt");
pub const LAYER_GENERIC_MULTI: &str = include_str!("../assets/prompts/layer_generic_multi.txt");
pub const SUBAGENT_TOOLS: &str = include_str!("../assets/prompts/subagent_tools.txt");

/// Replaces each `{name}` placeholder with its value. Unlisted braces pass
/// through unchanged.
pub fn render(template: &str, vars: &[(&str, &str)]) -> String {
    let mut out = template.to_string();
    for (name, value) in vars {
        out = out.replace(&format!("{{{name}}}"), value);
    }
    out
}

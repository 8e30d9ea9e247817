//! Salvage parsing for model output. Every agent format funnels through
//! [`parse_tool_list`], which tries progressively looser extractions:
//! fenced code block, first JSON value, bracketed Python-style list, then
//! bare identifier lines.

use serde_json::Value;
use thiserror::Error;

use crate::graph::ToolCatalog;

#[derive(Debug, Error)]
#[error("no tool list found in model output")]
pub struct NoListFound;

/// An ordered tool list split into catalog members and rejects.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedToolList {
    pub tools: Vec<String>,
    pub rejects: Vec<String>,
}

/// Extracts the first ordered tool list from raw model text and splits
/// catalog hits from rejects. Deterministic for a given input.
pub fn parse_tool_list(
    raw_text: &str,
    catalog: &ToolCatalog,
) -> Result<ParsedToolList, NoListFound> {
    let names = extract_name_list(raw_text).ok_or(NoListFound)?;
    let mut parsed = ParsedToolList::default();
    for name in names {
        if catalog.contains(&name) {
            parsed.tools.push(name);
        } else {
            parsed.rejects.push(name);
        }
    }
    Ok(parsed)
}

/// The raw ordered name list, before catalog filtering.
pub fn extract_name_list(raw_text: &str) -> Option<Vec<String>> {
    let candidates = [strip_fences(raw_text), raw_text.to_string()];
    for text in &candidates {
        if let Some(value) = extract_first_json(text) {
            if let Some(names) = names_from_json(&value) {
                return Some(names);
            }
        }
        if let Some(names) = bracketed_list(text) {
            return Some(names);
        }
    }
    identifier_lines(raw_text)
}

/// The contents of the first fenced code block, or the input unchanged.
pub fn strip_fences(text: &str) -> String {
    let Some(open) = text.find("```") else {
        return text.to_string();
    };
    let after = &text[open + 3..];
    // Skip a language tag on the opening fence.
    let body_start = after.find('\n').map(|i| i + 1).unwrap_or(0);
    let body = &after[body_start..];
    match body.find("```") {
        Some(close) => body[..close].to_string(),
        None => body.to_string(),
    }
}

/// Scans for the first balanced JSON object or array and parses it.
/// Normalizes single quotes when the strict parse fails.
pub fn extract_first_json(text: &str) -> Option<Value> {
    let bytes = text.as_bytes();
    for (start, &b) in bytes.iter().enumerate() {
        if b != b'{' && b != b'[' {
            continue;
        }
        let (open, close) = if b == b'{' {
            (b'{', b'}')
        } else {
            (b'[', b']')
        };
        let mut depth = 0usize;
        let mut in_string = false;
        let mut escaped = false;
        for (offset, &c) in bytes[start..].iter().enumerate() {
            if in_string {
                if escaped {
                    escaped = false;
                } else if c == b'\\' {
                    escaped = true;
                } else if c == b'"' {
                    in_string = false;
                }
                continue;
            }
            match c {
                b'"' => in_string = true,
                _ if c == open => depth += 1,
                _ if c == close => {
                    depth -= 1;
                    if depth == 0 {
                        let candidate = &text[start..=start + offset];
                        if let Ok(value) = serde_json::from_str::<Value>(candidate) {
                            return Some(value);
                        }
                        if let Ok(value) =
                            serde_json::from_str::<Value>(&normalize_quotes(candidate))
                        {
                            return Some(value);
                        }
                        break;
                    }
                }
                _ => {}
            }
        }
    }
    None
}

/// Converts single-quoted strings to double-quoted ones so Python-style
/// literals parse as JSON.
fn normalize_quotes(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_double = false;
    for c in text.chars() {
        match c {
            '"' => {
                in_double = !in_double;
                out.push(c);
            }
            '\'' if !in_double => out.push('"'),
            _ => out.push(c),
        }
    }
    out
}

/// Pulls an ordered name list out of a parsed JSON value. Arrays yield their
/// string elements (or each element's `tool`/`name` field); objects are
/// searched by the known trajectory keys first, then any array-valued field
/// in key order.
fn names_from_json(value: &Value) -> Option<Vec<String>> {
    match value {
        Value::Array(items) => {
            let mut names = Vec::new();
            for item in items {
                match item {
                    Value::String(s) => names.push(s.trim().to_string()),
                    Value::Object(map) => {
                        let field = map.get("tool").or_else(|| map.get("name"))?;
                        names.push(field.as_str()?.trim().to_string());
                    }
                    _ => return None,
                }
            }
            Some(names).filter(|n| !n.is_empty())
        }
        Value::Object(map) => {
            const KNOWN_KEYS: [&str; 6] = [
                "final_tool_trajectory",
                "refined_tool_trajectory",
                "initial_tool_trajectory",
                "tool_trajectory",
                "tools",
                "plan",
            ];
            for key in KNOWN_KEYS {
                if let Some(inner) = map.get(key) {
                    if let Some(names) = names_from_json(inner) {
                        return Some(names);
                    }
                }
            }
            for (_, inner) in map {
                if inner.is_array() {
                    if let Some(names) = names_from_json(inner) {
                        return Some(names);
                    }
                }
            }
            None
        }
        _ => None,
    }
}

/// Bracketed Python-style list of quoted names: `['a', 'b']`.
fn bracketed_list(text: &str) -> Option<Vec<String>> {
    let start = text.find('[')?;
    let end = text[start..].find(']')? + start;
    let inner = &text[start + 1..end];
    let names: Vec<String> = inner
        .split(',')
        .map(|part| {
            part.trim()
                .trim_matches(|c| c == '\'' || c == '"')
                .trim()
                .to_string()
        })
        .filter(|part| !part.is_empty())
        .collect();
    if names.is_empty() || names.iter().any(|n| n.contains('\n') || n.contains(':')) {
        return None;
    }
    Some(names)
}

/// Last resort: lines that are bare identifiers, optionally bulleted or
/// numbered.
fn identifier_lines(text: &str) -> Option<Vec<String>> {
    let mut names = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        let line = line
            .trim_start_matches(|c: char| c.is_ascii_digit())
            .trim_start_matches(['.', ')', ':', '-', '*'])
            .trim();
        if !line.is_empty()
            && line.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            && line.chars().any(|c| c.is_ascii_alphabetic())
        {
            names.push(line.to_string());
        }
    }
    if names.is_empty() {
        None
    } else {
        Some(names)
    }
}

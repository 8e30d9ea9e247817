//! C ABI over the deterministic scoring engine: dependency graphs, layer
//! stratification, centrality-derived cost models, weighted edit distance,
//! key-tool correctness, and Elo updates.
//!
//! Conventions:
//! - Opaque handles (`HtamGraph`, `HtamCostModel`) are created and freed by
//!   this library; never free them any other way.
//! - Functions return `HtamStatus`; `htam_last_error` holds a thread-local
//!   message for the most recent failure on the calling thread.
//! - Tool lists cross the boundary as `const char *const *` plus a length.
//! - The substitution similarity used by `htam_path_similarity` is the
//!   deterministic lexical fallback (token Jaccard over tool names).
//!
//! The matching header lives at `include/htam.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use htam::graph::{
    build_cost_model, stratify_longest_path, validate_dag, CentralityScores, CostModel,
    DependencyGraph, LayerAssignment, PageRankOptions,
};
use htam::metrics::{
    elo_expected, elo_update, f1, key_precision, key_recall, lexical_similarity, path_similarity,
    weighted_edit_distance, LexicalSimilarity,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HtamStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidGraph = 4,
    InvalidArgument = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(message).expect("nul bytes stripped");
    });
}

/// Message for the most recent error on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn htam_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

pub struct HtamGraph {
    graph: DependencyGraph,
    layers: Option<LayerAssignment>,
}

pub struct HtamCostModel {
    model: CostModel,
}

unsafe fn read_str<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, HtamStatus> {
    if ptr.is_null() {
        set_error(format!("{name} is null"));
        return Err(HtamStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error(format!("{name} is not valid UTF-8"));
        HtamStatus::InvalidUtf8
    })
}

unsafe fn read_list(
    items: *const *const c_char,
    len: usize,
    name: &str,
) -> Result<Vec<String>, HtamStatus> {
    if len == 0 {
        return Ok(Vec::new());
    }
    if items.is_null() {
        set_error(format!("{name} is null with nonzero length"));
        return Err(HtamStatus::NullArgument);
    }
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let entry = *items.add(i);
        out.push(read_str(entry, name)?.to_string());
    }
    Ok(out)
}

/// Parses a dependency graph from its JSON file format
/// (`{domain, nodes, edges, description}`).
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn htam_graph_from_json(
    json: *const c_char,
    out: *mut *mut HtamGraph,
) -> HtamStatus {
    if out.is_null() {
        set_error("out is null");
        return HtamStatus::NullArgument;
    }
    let text = match read_str(json, "json") {
        Ok(text) => text,
        Err(status) => return status,
    };
    match DependencyGraph::from_json(text) {
        Ok(graph) => {
            *out = Box::into_raw(Box::new(HtamGraph {
                graph,
                layers: None,
            }));
            HtamStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            HtamStatus::ParseError
        }
    }
}

/// # Safety
/// `graph` must come from `htam_graph_from_json` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn htam_graph_free(graph: *mut HtamGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Validates the DAG invariants. Writes 1 to `is_valid` when the graph has
/// no violations, 0 otherwise (the first violation is reported through
/// `htam_last_error`).
///
/// # Safety
/// `graph` must be a live handle; `is_valid` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn htam_graph_validate(
    graph: *const HtamGraph,
    is_valid: *mut i32,
) -> HtamStatus {
    if graph.is_null() || is_valid.is_null() {
        set_error("graph or is_valid is null");
        return HtamStatus::NullArgument;
    }
    let report = validate_dag(&(*graph).graph);
    *is_valid = i32::from(report.is_valid());
    if let Some(first) = report.violations.first() {
        set_error(first.to_string());
    }
    HtamStatus::Ok
}

unsafe fn stratified<'a>(handle: *mut HtamGraph) -> Result<&'a LayerAssignment, HtamStatus> {
    let state = &mut *handle;
    if state.layers.is_none() {
        match stratify_longest_path(&state.graph) {
            Ok(layers) => state.layers = Some(layers),
            Err(e) => {
                set_error(e.to_string());
                return Err(HtamStatus::InvalidGraph);
            }
        }
    }
    Ok(state.layers.as_ref().expect("just computed"))
}

/// Number of layers under longest-path stratification.
///
/// # Safety
/// `graph` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn htam_graph_layer_count(
    graph: *mut HtamGraph,
    out: *mut usize,
) -> HtamStatus {
    if graph.is_null() || out.is_null() {
        set_error("graph or out is null");
        return HtamStatus::NullArgument;
    }
    match stratified(graph) {
        Ok(layers) => {
            *out = layers.layer_count;
            HtamStatus::Ok
        }
        Err(status) => status,
    }
}

/// 1-based layer index of a tool under longest-path stratification.
///
/// # Safety
/// `graph` must be a live handle; `tool` a valid string; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn htam_graph_layer_of(
    graph: *mut HtamGraph,
    tool: *const c_char,
    out: *mut usize,
) -> HtamStatus {
    if graph.is_null() || out.is_null() {
        set_error("graph or out is null");
        return HtamStatus::NullArgument;
    }
    let tool = match read_str(tool, "tool") {
        Ok(tool) => tool,
        Err(status) => return status,
    };
    match stratified(graph) {
        Ok(layers) => match layers.layer(tool) {
            Some(layer) => {
                *out = layer;
                HtamStatus::Ok
            }
            None => {
                set_error(format!("tool {tool} is not in the graph"));
                HtamStatus::InvalidArgument
            }
        },
        Err(status) => status,
    }
}

/// Builds the centrality-derived cost model from a graph.
///
/// # Safety
/// `graph` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn htam_cost_model_build(
    graph: *const HtamGraph,
    base_cost: f64,
    alpha: f64,
    damping: f64,
    uniform_mode: i32,
    out: *mut *mut HtamCostModel,
) -> HtamStatus {
    if graph.is_null() || out.is_null() {
        set_error("graph or out is null");
        return HtamStatus::NullArgument;
    }
    if !(damping > 0.0 && damping < 1.0) {
        set_error(format!("damping must be in (0, 1), got {damping}"));
        return HtamStatus::InvalidArgument;
    }
    let options = PageRankOptions {
        damping,
        ..PageRankOptions::default()
    };
    let scores = CentralityScores::compute(&(*graph).graph, &options);
    match build_cost_model(&scores, base_cost, alpha, uniform_mode != 0) {
        Ok(model) => {
            *out = Box::into_raw(Box::new(HtamCostModel { model }));
            HtamStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            HtamStatus::InvalidArgument
        }
    }
}

/// Uniform cost model: every insertion/deletion costs `base_cost`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn htam_cost_model_uniform(
    base_cost: f64,
    out: *mut *mut HtamCostModel,
) -> HtamStatus {
    if out.is_null() {
        set_error("out is null");
        return HtamStatus::NullArgument;
    }
    match CostModel::uniform(base_cost) {
        Ok(model) => {
            *out = Box::into_raw(Box::new(HtamCostModel { model }));
            HtamStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            HtamStatus::InvalidArgument
        }
    }
}

/// # Safety
/// `model` must come from a cost-model constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn htam_cost_model_free(model: *mut HtamCostModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Insertion/deletion cost for one tool (unknown tools fall back to the
/// base cost).
///
/// # Safety
/// `model` must be a live handle; `tool` a valid string; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn htam_ins_del_cost(
    model: *const HtamCostModel,
    tool: *const c_char,
    out: *mut f64,
) -> HtamStatus {
    if model.is_null() || out.is_null() {
        set_error("model or out is null");
        return HtamStatus::NullArgument;
    }
    let tool = match read_str(tool, "tool") {
        Ok(tool) => tool,
        Err(status) => return status,
    };
    *out = (*model).model.ins_del(tool);
    HtamStatus::Ok
}

/// Weighted edit distance between an agent tool sequence and a ground-truth
/// sequence, with lexical substitution similarity.
///
/// # Safety
/// `model` must be a live handle; both arrays must hold `len` valid strings.
#[no_mangle]
pub unsafe extern "C" fn htam_edit_distance(
    model: *const HtamCostModel,
    agent: *const *const c_char,
    agent_len: usize,
    gt: *const *const c_char,
    gt_len: usize,
    out: *mut f64,
) -> HtamStatus {
    if model.is_null() || out.is_null() {
        set_error("model or out is null");
        return HtamStatus::NullArgument;
    }
    let agent = match read_list(agent, agent_len, "agent") {
        Ok(list) => list,
        Err(status) => return status,
    };
    let gt = match read_list(gt, gt_len, "gt") {
        Ok(list) => list,
        Err(status) => return status,
    };
    *out = weighted_edit_distance(&agent, &gt, &(*model).model, &LexicalSimilarity);
    HtamStatus::Ok
}

/// Normalized path similarity in [0, 1]; errors when both sequences are
/// empty.
///
/// # Safety
/// `model` must be a live handle; both arrays must hold `len` valid strings.
#[no_mangle]
pub unsafe extern "C" fn htam_path_similarity(
    model: *const HtamCostModel,
    agent: *const *const c_char,
    agent_len: usize,
    gt: *const *const c_char,
    gt_len: usize,
    out: *mut f64,
) -> HtamStatus {
    if model.is_null() || out.is_null() {
        set_error("model or out is null");
        return HtamStatus::NullArgument;
    }
    let agent = match read_list(agent, agent_len, "agent") {
        Ok(list) => list,
        Err(status) => return status,
    };
    let gt = match read_list(gt, gt_len, "gt") {
        Ok(list) => list,
        Err(status) => return status,
    };
    match path_similarity(&agent, &gt, &(*model).model, &LexicalSimilarity) {
        Ok(score) => {
            *out = score;
            HtamStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            HtamStatus::InvalidArgument
        }
    }
}

/// Lexical tool-name similarity in [0, 1]; returns -1 on invalid input.
///
/// # Safety
/// Both arguments must be valid NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn htam_lexical_similarity(a: *const c_char, b: *const c_char) -> f64 {
    let (Ok(a), Ok(b)) = (read_str(a, "a"), read_str(b, "b")) else {
        return -1.0;
    };
    lexical_similarity(a, b)
}

/// Key-tool recall: fraction of `key_gt` present in `agent_path`.
///
/// # Safety
/// Both arrays must hold `len` valid strings; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn htam_key_recall(
    key_gt: *const *const c_char,
    key_gt_len: usize,
    agent_path: *const *const c_char,
    agent_len: usize,
    out: *mut f64,
) -> HtamStatus {
    if out.is_null() {
        set_error("out is null");
        return HtamStatus::NullArgument;
    }
    let key_gt = match read_list(key_gt, key_gt_len, "key_gt") {
        Ok(list) => list.into_iter().collect(),
        Err(status) => return status,
    };
    let agent = match read_list(agent_path, agent_len, "agent_path") {
        Ok(list) => list,
        Err(status) => return status,
    };
    match key_recall(&key_gt, &agent) {
        Ok(score) => {
            *out = score;
            HtamStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            HtamStatus::InvalidArgument
        }
    }
}

/// Key-tool precision: fraction of `key_agent` present in `gt_path`. An
/// empty key set scores 0.
///
/// # Safety
/// Both arrays must hold `len` valid strings; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn htam_key_precision(
    key_agent: *const *const c_char,
    key_agent_len: usize,
    gt_path: *const *const c_char,
    gt_len: usize,
    out: *mut f64,
) -> HtamStatus {
    if out.is_null() {
        set_error("out is null");
        return HtamStatus::NullArgument;
    }
    let key_agent = match read_list(key_agent, key_agent_len, "key_agent") {
        Ok(list) => list.into_iter().collect(),
        Err(status) => return status,
    };
    let gt = match read_list(gt_path, gt_len, "gt_path") {
        Ok(list) => list,
        Err(status) => return status,
    };
    *out = key_precision(&key_agent, &gt);
    HtamStatus::Ok
}

/// Harmonic mean of recall and precision, 0 when both are 0.
#[no_mangle]
pub extern "C" fn htam_f1(recall: f64, precision: f64) -> f64 {
    f1(recall, precision)
}

/// Expected scores for both sides under the 400-point logistic curve.
///
/// # Safety
/// `e_a` and `e_b` must be valid pointers (either may be null to skip).
#[no_mangle]
pub unsafe extern "C" fn htam_elo_expected(r_a: f64, r_b: f64, e_a: *mut f64, e_b: *mut f64) {
    let (a, b) = elo_expected(r_a, r_b);
    if !e_a.is_null() {
        *e_a = a;
    }
    if !e_b.is_null() {
        *e_b = b;
    }
}

/// One Elo update; `s_a` must be 0, 0.5, or 1.
///
/// # Safety
/// `r_a_out` and `r_b_out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn htam_elo_update(
    r_a: f64,
    r_b: f64,
    s_a: f64,
    k: f64,
    r_a_out: *mut f64,
    r_b_out: *mut f64,
) -> HtamStatus {
    if r_a_out.is_null() || r_b_out.is_null() {
        set_error("r_a_out or r_b_out is null");
        return HtamStatus::NullArgument;
    }
    if s_a != 0.0 && s_a != 0.5 && s_a != 1.0 {
        set_error(format!("s_a must be 0, 0.5, or 1, got {s_a}"));
        return HtamStatus::InvalidArgument;
    }
    let (a, b) = elo_update(r_a, r_b, s_a, k);
    *r_a_out = a;
    *r_b_out = b;
    HtamStatus::Ok
}

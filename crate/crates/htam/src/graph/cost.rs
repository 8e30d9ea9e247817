//! Edit-cost tables derived from centrality scores. Inserting or deleting a
//! highly central tool costs more than touching a peripheral one.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CentralityScores, GraphError};

/// Per-tool cost tables for the weighted edit distance.
///
/// Unknown tools (named in a plan but absent from the graph) fall back to
/// `base_cost` and zero centrality, so scoring never fails on hallucinated
/// tool names.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CostModel {
    pub base_cost: f64,
    pub alpha: f64,
    pub uniform_mode: bool,
    pub ins_del_cost: BTreeMap<String, f64>,
    pub odct: BTreeMap<String, f64>,
    pub prct: BTreeMap<String, f64>,
    pub ci: BTreeMap<String, f64>,
    pub cc: BTreeMap<String, f64>,
}

impl CostModel {
    /// A uniform model where every operation costs `base_cost`.
    pub fn uniform(base_cost: f64) -> Result<Self, GraphError> {
        if base_cost <= 0.0 {
            return Err(GraphError::NegativeBase(base_cost));
        }
        Ok(Self {
            base_cost,
            alpha: 0.0,
            uniform_mode: true,
            ins_del_cost: BTreeMap::new(),
            odct: BTreeMap::new(),
            prct: BTreeMap::new(),
            ci: BTreeMap::new(),
            cc: BTreeMap::new(),
        })
    }

    /// Insertion/deletion cost for `tool`, defaulting to `base_cost`.
    pub fn ins_del(&self, tool: &str) -> f64 {
        if self.uniform_mode {
            return self.base_cost;
        }
        self.ins_del_cost
            .get(tool)
            .copied()
            .unwrap_or(self.base_cost)
    }
}

/// Builds the cost tables from centrality scores:
///
/// - insertion/deletion: `base × (1 + (ODC + α·PRC) / 2)`
/// - out-degree cost:    `base × (1 + ODC)`
/// - pagerank cost:      `base × (1 + α·PRC)`
/// - combined importance: `(ODC + PRC) / 2`
/// - combined cost:       `(ODCt + PRCt) / 2`
///
/// `uniform_mode` keeps the tables but forces every ins/del lookup to
/// `base_cost`.
pub fn build_cost_model(
    scores: &CentralityScores,
    base_cost: f64,
    alpha: f64,
    uniform_mode: bool,
) -> Result<CostModel, GraphError> {
    if base_cost <= 0.0 {
        return Err(GraphError::NegativeBase(base_cost));
    }
    let mut model = CostModel {
        base_cost,
        alpha,
        uniform_mode,
        ins_del_cost: BTreeMap::new(),
        odct: BTreeMap::new(),
        prct: BTreeMap::new(),
        ci: BTreeMap::new(),
        cc: BTreeMap::new(),
    };
    for tool in scores.odc.keys().chain(scores.prc.keys()) {
        if model.ins_del_cost.contains_key(tool) {
            continue;
        }
        let odc = scores.odc_of(tool);
        let prc = scores.prc_of(tool);
        let ins_del = base_cost * (1.0 + (odc + alpha * prc) / 2.0);
        let odct = base_cost * (1.0 + odc);
        let prct = base_cost * (1.0 + alpha * prc);
        model.ins_del_cost.insert(tool.clone(), ins_del);
        model.odct.insert(tool.clone(), odct);
        model.prct.insert(tool.clone(), prct);
        model.ci.insert(tool.clone(), (odc + prc) / 2.0);
        model.cc.insert(tool.clone(), (odct + prct) / 2.0);
    }
    Ok(model)
}

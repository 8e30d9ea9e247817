//! Centrality-weighted edit distance between an agent's tool sequence and
//! the ground-truth path, and its normalization into a path-similarity score.

use thiserror::Error;

use crate::graph::CostModel;

use super::similarity::SimilarityProvider;

#[derive(Debug, Error)]
pub enum StructuralError {
    #[error("path similarity is undefined when both sequences are empty")]
    BothEmpty,
}

/// Levenshtein-style dynamic program with per-tool insertion/deletion costs
/// and a similarity-based substitution cost:
///
/// - aligning equal tools costs 0;
/// - deleting agent tool `a` costs `ins_del(a)`;
/// - inserting ground-truth tool `g` costs `ins_del(g)`;
/// - substituting costs `1 − similarity(a, g)`.
///
/// Every cell takes the minimum over all three moves, including the
/// zero-cost diagonal on a match. With per-tool weighted costs, skipping a
/// match can genuinely win (delete a cheap tool plus a near-free
/// substitution may undercut deleting an expensive one), and the result
/// must stay the true minimum edit-script cost.
pub fn weighted_edit_distance(
    agent: &[String],
    gt: &[String],
    cost_model: &CostModel,
    sim: &dyn SimilarityProvider,
) -> f64 {
    let (m, n) = (agent.len(), gt.len());
    let mut dist = vec![vec![0.0f64; n + 1]; m + 1];
    for i in 1..=m {
        dist[i][0] = dist[i - 1][0] + cost_model.ins_del(&agent[i - 1]);
    }
    for j in 1..=n {
        dist[0][j] = dist[0][j - 1] + cost_model.ins_del(&gt[j - 1]);
    }
    for i in 1..=m {
        for j in 1..=n {
            let (a, g) = (&agent[i - 1], &gt[j - 1]);
            let diagonal = if a == g {
                0.0
            } else {
                1.0 - sim.similarity(a, g)
            };
            let del = dist[i - 1][j] + cost_model.ins_del(a);
            let ins = dist[i][j - 1] + cost_model.ins_del(g);
            let sub = dist[i - 1][j - 1] + diagonal;
            dist[i][j] = del.min(ins).min(sub);
        }
    }
    dist[m][n]
}

/// The delete-everything-then-insert-everything script cost, a true upper
/// bound on the edit distance. Lower-clamped to `base_cost` so the
/// normalization below never divides by zero.
pub fn max_possible_cost(agent: &[String], gt: &[String], cost_model: &CostModel) -> f64 {
    let total: f64 = agent
        .iter()
        .chain(gt.iter())
        .map(|t| cost_model.ins_del(t))
        .sum();
    total.max(cost_model.base_cost)
}

/// `1 − D / MaxPossibleCost`, in [0, 1]; exactly 1 iff the distance is 0.
pub fn path_similarity(
    agent: &[String],
    gt: &[String],
    cost_model: &CostModel,
    sim: &dyn SimilarityProvider,
) -> Result<f64, StructuralError> {
    if agent.is_empty() && gt.is_empty() {
        return Err(StructuralError::BothEmpty);
    }
    let dist = weighted_edit_distance(agent, gt, cost_model, sim);
    if dist == 0.0 {
        return Ok(1.0);
    }
    Ok(1.0 - dist / max_possible_cost(agent, gt, cost_model))
}

//! Elo completeness tournament: pairwise judged battles, rating updates,
//! and the deterministic schedule they run on.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::judge::{JudgeError, PlanJudge};

/// Outcome of one judged battle, from agent A's perspective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    A,
    B,
    Tie,
}

impl Verdict {
    /// Normalizes a raw judge reply: trim, strip wrapping quotes, case-fold.
    /// Accepts exactly `a`, `b`, or `tie`.
    pub fn parse(raw: &str) -> Option<Verdict> {
        let cleaned = raw
            .trim()
            .trim_matches(|c| c == '"' || c == '\'' || c == '`' || c == '.')
            .trim()
            .to_lowercase();
        match cleaned.as_str() {
            "a" => Some(Verdict::A),
            "b" => Some(Verdict::B),
            "tie" => Some(Verdict::Tie),
            _ => None,
        }
    }

    /// Actual score S for agent A.
    pub fn score_a(self) -> f64 {
        match self {
            Verdict::A => 1.0,
            Verdict::B => 0.0,
            Verdict::Tie => 0.5,
        }
    }
}

/// Expected scores for both sides under the 400-point logistic curve.
/// They always sum to 1.
pub fn elo_expected(r_a: f64, r_b: f64) -> (f64, f64) {
    let e_a = 1.0 / (1.0 + 10f64.powf((r_b - r_a) / 400.0));
    (e_a, 1.0 - e_a)
}

/// One rating update with `s_a` in {1, 0.5, 0}; B receives the complement.
/// The rating sum is invariant.
pub fn elo_update(r_a: f64, r_b: f64, s_a: f64, k: f64) -> (f64, f64) {
    let (e_a, e_b) = elo_expected(r_a, r_b);
    let s_b = 1.0 - s_a;
    (r_a + k * (s_a - e_a), r_b + k * (s_b - e_b))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BattleRecord {
    pub task_id: String,
    pub a: String,
    pub b: String,
    pub verdict: Verdict,
    pub r_a_after: f64,
    pub r_b_after: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedBattle {
    pub task_id: String,
    pub a: String,
    pub b: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EloState {
    pub ratings: BTreeMap<String, f64>,
    pub k_factor: f64,
    pub initial_rating: f64,
    pub history: Vec<BattleRecord>,
    pub skipped: Vec<SkippedBattle>,
}

impl EloState {
    pub fn new(
        agents: impl IntoIterator<Item = String>,
        k_factor: f64,
        initial_rating: f64,
    ) -> Self {
        Self {
            ratings: agents.into_iter().map(|a| (a, initial_rating)).collect(),
            k_factor,
            initial_rating,
            history: Vec::new(),
            skipped: Vec::new(),
        }
    }

    pub fn rating(&self, agent: &str) -> f64 {
        self.ratings
            .get(agent)
            .copied()
            .unwrap_or(self.initial_rating)
    }
}

/// One task's worth of battle context.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BattleTask {
    pub task_id: String,
    pub question: String,
}

/// Runs every unordered agent pair against every task and applies the Elo
/// updates in a deterministic order: tasks as given, pairs lexicographic by
/// label, optionally shuffled by `order_seed`. Judge protocol errors skip
/// the battle and are logged, never fatal.
pub fn run_tournament(
    plans: &BTreeMap<String, BTreeMap<String, Vec<String>>>,
    tasks: &[BattleTask],
    judge: &dyn PlanJudge,
    k_factor: f64,
    initial_rating: f64,
    order_seed: Option<u64>,
) -> EloState {
    let agents: Vec<&str> = plans.keys().map(String::as_str).collect();
    let mut state = EloState::new(
        agents.iter().map(|a| a.to_string()),
        k_factor,
        initial_rating,
    );

    let mut schedule: Vec<(&BattleTask, &str, &str)> = Vec::new();
    for task in tasks {
        for (i, a) in agents.iter().enumerate() {
            for b in agents.iter().skip(i + 1) {
                schedule.push((task, a, b));
            }
        }
    }
    if let Some(seed) = order_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        schedule.shuffle(&mut rng);
    }

    let empty: Vec<String> = Vec::new();
    for (task, a, b) in schedule {
        let flow_a = plans
            .get(a)
            .and_then(|m| m.get(&task.task_id))
            .unwrap_or(&empty);
        let flow_b = plans
            .get(b)
            .and_then(|m| m.get(&task.task_id))
            .unwrap_or(&empty);
        match judge.completeness(&task.question, a, flow_a, b, flow_b) {
            Ok(verdict) => {
                let (r_a, r_b) = (state.rating(a), state.rating(b));
                let (r_a_after, r_b_after) = elo_update(r_a, r_b, verdict.score_a(), k_factor);
                state.ratings.insert(a.to_string(), r_a_after);
                state.ratings.insert(b.to_string(), r_b_after);
                state.history.push(BattleRecord {
                    task_id: task.task_id.clone(),
                    a: a.to_string(),
                    b: b.to_string(),
                    verdict,
                    r_a_after,
                    r_b_after,
                });
            }
            Err(error) => {
                let reason = match error {
                    JudgeError::Protocol(reason) => reason,
                    other => other.to_string(),
                };
                state.skipped.push(SkippedBattle {
                    task_id: task.task_id.clone(),
                    a: a.to_string(),
                    b: b.to_string(),
                    reason,
                });
            }
        }
    }
    state
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_ratings_expect_half() {
        let (e_a, e_b) = elo_expected(1000.0, 1000.0);
        assert_eq!(e_a, 0.5);
        assert_eq!(e_b, 0.5);
    }

    #[test]
    fn two_hundred_point_gap_expects_about_three_quarters() {
        let (e_a, _) = elo_expected(1200.0, 1000.0);
        assert!((e_a - 0.7597).abs() < 1e-3);
        let (e_low, _) = elo_expected(1000.0, 1200.0);
        assert!((e_low - 0.2403).abs() < 1e-3);
    }

    #[test]
    fn expected_scores_sum_to_one() {
        for (r_a, r_b) in [(1000.0, 1000.0), (1250.0, 980.0), (600.0, 1900.0)] {
            let (e_a, e_b) = elo_expected(r_a, r_b);
            assert!((e_a + e_b - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn even_win_moves_sixteen_points_at_k32() {
        let (r_a, r_b) = elo_update(1000.0, 1000.0, 1.0, 32.0);
        assert_eq!(r_a, 1016.0);
        assert_eq!(r_b, 984.0);
    }

    #[test]
    fn draw_at_equal_ratings_changes_nothing() {
        let (r_a, r_b) = elo_update(1000.0, 1000.0, 0.5, 32.0);
        assert_eq!(r_a, 1000.0);
        assert_eq!(r_b, 1000.0);
    }

    #[test]
    fn favorite_win_gains_less() {
        // Frozen via an independent plug-in of the update formula:
        // e_a = 1/(1+10^(-0.5)) = 0.7597469266479578,
        // r_a' = 1100 + 32*(1-e_a) = 1107.6880983472654.
        let (r_a, r_b) = elo_update(1100.0, 900.0, 1.0, 32.0);
        assert!((r_a - 1107.6880983472654).abs() < 1e-9);
        assert!((r_b - 892.3119016527346).abs() < 1e-9);
        assert!((r_a + r_b - 2000.0).abs() < 1e-9);
    }

    #[test]
    fn verdict_normalization() {
        assert_eq!(Verdict::parse("A"), Some(Verdict::A));
        assert_eq!(Verdict::parse("\"b\""), Some(Verdict::B));
        assert_eq!(Verdict::parse("  'Tie'  "), Some(Verdict::Tie));
        assert_eq!(Verdict::parse("TIE."), Some(Verdict::Tie));
        assert_eq!(Verdict::parse("Agent A is better"), None);
        assert_eq!(Verdict::parse(""), None);
    }
}

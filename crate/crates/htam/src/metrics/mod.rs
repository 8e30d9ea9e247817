//! Plan scoring: key-tool correctness, centrality-weighted path similarity,
//! and Elo-based holistic completeness.

mod correctness;
mod editdist;
mod elo;
mod judge;
mod similarity;

pub use correctness::{
    f1, key_precision, key_recall, score_correctness, CorrectnessError, CorrectnessScores, KeySets,
};
pub use editdist::{max_possible_cost, path_similarity, weighted_edit_distance, StructuralError};
pub use elo::{
    elo_expected, elo_update, run_tournament, BattleRecord, BattleTask, EloState, SkippedBattle,
    Verdict,
};
pub use judge::{BackendJudge, JudgeError, KeySetExtractor, MockJudge, PlanJudge};
pub use similarity::{
    lexical_similarity, EmbeddingSimilarity, ExactMatchSimilarity, LexicalSimilarity,
    SimilarityProvider,
};

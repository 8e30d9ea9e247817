//! Hierarchical task-abstraction planning over tool-dependency graphs, with
//! an architecture-agnostic evaluation suite for the plans any agent emits.
//!
//! The crate is organized around five pieces:
//!
//! - [`graph`]: the tool-dependency DAG, its layer stratification, and the
//!   centrality-derived edit-cost tables.
//! - [`backend`]: pluggable completion and embedding providers, including a
//!   deterministic scripted mock and a persistent response cache.
//! - [`planner`]: the hierarchical planner plus CoT, ReAct, Plan&Execute,
//!   and Debate baselines, all producing the same [`planner::Plan`] shape.
//! - [`metrics`]: key-tool correctness, centrality-weighted path similarity,
//!   and Elo completeness tournaments.
//! - [`benchgen`] and [`harness`]: benchmark task construction and the
//!   end-to-end evaluation runner behind the `htam` CLI.

pub mod backend;
pub mod benchgen;
pub mod graph;
pub mod harness;
pub mod metrics;
pub mod planner;
pub mod prompts;

//! Runner configuration and per-query records.

use std::collections::BTreeSet;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fetch::FetchPolicy;
use crate::types::{AttributionDocument, Dimension};

/// The search-depth intervals used by the ablation harness by default.
pub const DEFAULT_ABLATION_BUDGETS: [u64; 7] = [2, 10, 30, 50, 70, 100, 150];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// Bound on concurrent fetch/evaluation tasks.
    pub evaluator_concurrency: usize,
    /// Bound on concurrent report acquisitions.
    pub agent_concurrency: usize,
    pub fetch_policy: FetchPolicy,
    /// Enabled dimensions; never empty.
    pub dimensions: BTreeSet<Dimension>,
    /// Which judge backend the run used; echoed into manifests.
    pub judge_label: String,
    /// Maximum agent tool calls, the ablation knob.
    pub tool_call_budget: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            evaluator_concurrency: 15,
            agent_concurrency: 10,
            fetch_policy: FetchPolicy::default(),
            dimensions: Dimension::ALL.into_iter().collect(),
            judge_label: "heuristic".to_string(),
            tool_call_budget: None,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("concurrency values must be at least 1")]
    ZeroConcurrency,
    #[error("at least one dimension must be enabled")]
    NoDimensions,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.evaluator_concurrency < 1 || self.agent_concurrency < 1 {
            return Err(ConfigError::ZeroConcurrency);
        }
        if self.dimensions.is_empty() {
            return Err(ConfigError::NoDimensions);
        }
        Ok(())
    }
}

/// One query in a batch manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuerySpec {
    pub query_id: String,
    pub query: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report_path: Option<PathBuf>,
}

/// Counters from one pipeline run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    pub fetches: u64,
    /// Judged evaluations that consulted the backend at least once.
    pub judged_evals: u64,
    pub judge_calls: u64,
    /// Judged evaluations whose every backend call failed in transport.
    pub judge_transport_exhausted: u64,
    pub elapsed_ms: u64,
}

/// Outcome of one query: the completed document plus bookkeeping.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub query_id: String,
    pub query: String,
    /// Report provenance: a file path or the generating command.
    pub origin: String,
    pub document: AttributionDocument,
    /// True iff the document has at least one attribution-citation pair.
    pub success: bool,
    pub generation_attempts: u32,
    pub generation_error: Option<String>,
    pub stats: RunStats,
}

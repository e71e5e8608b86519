//! Aggregation of evaluation results into pass rates, adjusted rates, error
//! breakdowns and ablation tables.

mod rate;
mod render;

pub use rate::{render_opt, Rate};
pub use render::{
    render_ablation_csv, render_ablation_markdown, render_comparison, render_report, ReportFormat,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fetch::FetchCategory;
use crate::types::{AttributionDocument, Dimension, EvalFlag, EvalResult, Score};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("cannot compute a rate over zero records")]
    EmptyInput,
    #[error("unknown report format `{0}`")]
    UnknownFormat(String),
}

/// Per-dimension counts and rates. `pass_rate` excludes `not_evaluated`
/// results from the denominator; `pass_rate_all` includes them, covering the
/// alternate reading of headline percentages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionStats {
    pub passed: u64,
    pub failed: u64,
    pub not_evaluated: u64,
    pub pass_rate: Option<Rate>,
    pub pass_rate_all: Option<Rate>,
    /// Pass rate with rate-limited pairs removed from both numerator and
    /// denominator.
    pub adjusted_pass_rate: Option<Rate>,
    pub rate_limited_excluded: u64,
}

/// Aggregated metrics for one run (or one budget group).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub label: String,
    pub n_queries: u64,
    pub n_success: u64,
    pub success_rate: Option<Rate>,
    pub n_pairs: u64,
    pub dimensions: BTreeMap<Dimension, DimensionStats>,
    pub error_breakdown: BTreeMap<String, u64>,
    /// Present on ablation summaries: one row per budget, ascending.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_rows: Option<Vec<AblationRow>>,
}

impl MetricsReport {
    /// Builds a report over completed documents, one per query.
    pub fn from_documents(label: &str, docs: &[&AttributionDocument]) -> MetricsReport {
        let n_queries = docs.len() as u64;
        let n_success = docs.iter().filter(|d| !d.pairs().is_empty()).count() as u64;
        let n_pairs: u64 = docs.iter().map(|d| d.pairs().len() as u64).sum();
        let evals: Vec<&EvalResult> = docs.iter().flat_map(|d| d.evals.iter()).collect();

        let mut dimensions = BTreeMap::new();
        for dim in Dimension::ALL {
            if evals.iter().any(|e| e.dimension == dim) {
                dimensions.insert(dim, dimension_stats_ref(&evals, dim));
            }
        }

        MetricsReport {
            label: label.to_string(),
            n_queries,
            n_success,
            success_rate: Rate::new(n_success, n_queries),
            n_pairs,
            dimensions,
            error_breakdown: error_breakdown(docs),
            budget_rows: None,
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn dimension(&self, dim: Dimension) -> Option<&DimensionStats> {
        self.dimensions.get(&dim)
    }
}

/// Fraction of queries whose report produced at least one citation-claim
/// pair. Empty input is rejected, not zero.
pub fn success_rate(successes: &[bool]) -> Result<Rate, MetricsError> {
    if successes.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let n = successes.iter().filter(|&&s| s).count() as u64;
    Ok(Rate::new(n, successes.len() as u64).expect("non-empty input"))
}

/// Counts and rates for one dimension across an eval set.
pub fn dimension_stats(evals: &[EvalResult], dim: Dimension) -> DimensionStats {
    let refs: Vec<&EvalResult> = evals.iter().collect();
    dimension_stats_ref(&refs, dim)
}

fn dimension_stats_ref(evals: &[&EvalResult], dim: Dimension) -> DimensionStats {
    let mut passed = 0;
    let mut failed = 0;
    let mut not_evaluated = 0;
    let mut adj_passed = 0;
    let mut adj_failed = 0;
    let mut rate_limited_excluded = 0;

    for e in evals.iter().filter(|e| e.dimension == dim) {
        let rate_limited = e.flags.contains(&EvalFlag::RateLimitedSource);
        match e.score {
            Score::Pass => {
                passed += 1;
                if rate_limited {
                    rate_limited_excluded += 1;
                } else {
                    adj_passed += 1;
                }
            }
            Score::Fail => {
                failed += 1;
                if rate_limited {
                    rate_limited_excluded += 1;
                } else {
                    adj_failed += 1;
                }
            }
            Score::NotEvaluated => not_evaluated += 1,
        }
    }

    DimensionStats {
        passed,
        failed,
        not_evaluated,
        pass_rate: Rate::new(passed, passed + failed),
        pass_rate_all: Rate::new(passed, passed + failed + not_evaluated),
        adjusted_pass_rate: Rate::new(adj_passed, adj_passed + adj_failed),
        rate_limited_excluded,
    }
}

/// Primary pass rate for a dimension; `None` marks an undefined rate.
pub fn pass_rate(evals: &[EvalResult], dim: Dimension) -> Option<Rate> {
    dimension_stats(evals, dim).pass_rate
}

/// Pass rate with rate-limited pairs removed from numerator and denominator.
pub fn adjusted_pass_rate(evals: &[EvalResult], dim: Dimension) -> Option<Rate> {
    dimension_stats(evals, dim).adjusted_pass_rate
}

/// Buckets every failed link_works eval by its citation's fetch category.
/// The bucket counts sum to the link_works failure count.
pub fn error_breakdown(docs: &[&AttributionDocument]) -> BTreeMap<String, u64> {
    let mut out = BTreeMap::new();
    for doc in docs {
        for e in &doc.evals {
            if e.dimension != Dimension::LinkWorks || e.score != Score::Fail {
                continue;
            }
            let key = match doc.citation(e.citation_id).and_then(|c| c.fetch_outcome.as_ref()) {
                Some(outcome) => match outcome.category {
                    FetchCategory::Ok => "empty_content",
                    FetchCategory::Blocked => "blocked",
                    FetchCategory::Timeout => "timeout",
                    FetchCategory::Unreachable => "unreachable",
                    FetchCategory::RateLimited => "rate_limited",
                    FetchCategory::HttpError { code } => match code {
                        400..=499 => "http_4xx",
                        500..=599 => "http_5xx",
                        _ => "http_other",
                    },
                },
                None => "not_fetched",
            };
            *out.entry(key.to_string()).or_insert(0) += 1;
        }
    }
    out
}

/// One wide row of the search-depth ablation table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationRow {
    pub budget: u64,
    pub link_works: Option<Rate>,
    pub relevant_content: Option<Rate>,
    pub fact_check: Option<Rate>,
}

/// Rows in ascending budget order regardless of input order.
pub fn ablation_table(groups: &BTreeMap<u64, MetricsReport>) -> Vec<AblationRow> {
    groups
        .iter()
        .map(|(&budget, report)| AblationRow {
            budget,
            link_works: report
                .dimension(Dimension::LinkWorks)
                .and_then(|d| d.pass_rate),
            relevant_content: report
                .dimension(Dimension::RelevantContent)
                .and_then(|d| d.pass_rate),
            fact_check: report
                .dimension(Dimension::FactCheck)
                .and_then(|d| d.pass_rate),
        })
        .collect()
}

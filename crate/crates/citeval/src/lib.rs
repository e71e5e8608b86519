//! citeval: extracts citation-claim pairs from Markdown research reports,
//! retrieves the cited sources, and scores every pair on link accessibility,
//! topical relevance, and factual support.
//!
//! The crate is organized along the pipeline:
//!
//! - [`parser`]: deterministic Markdown parsing into an
//!   [`types::AttributionDocument`] — no network, no inference.
//! - [`fetch`]: retrieval of cited URLs with bounded retries, outcome
//!   classification, text extraction, and a record-replay cache.
//! - [`judge`]: rubric prompts and backends scoring Relevant Content and
//!   Fact Check, plus the pure Link Works evaluator.
//! - [`runner`]: bounded-concurrency orchestration over documents, batches,
//!   and search-depth ablations.
//! - [`metrics`]: exact-rational aggregation into pass rates, adjusted
//!   rates, error breakdowns and ablation tables.

pub mod diag;
pub mod fetch;
pub mod judge;
pub mod metrics;
pub mod parser;
pub mod runner;
pub mod types;

pub use types::{
    Attribution, AttributionDocument, Citation, CitationMarker, Dimension, EvalFlag, EvalResult,
    MarkerKind, Score, SourceDocument, Span, SCHEMA_VERSION,
};

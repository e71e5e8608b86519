//! Core document model: spans, citations, attributions and evaluation results.
//!
//! All spans are half-open `[start, end)` offsets counted in Unicode scalar
//! values (chars) of the canonical text of a document. The JSON schema
//! (version 1) serializes spans as two-element integer arrays.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::diag::Diagnostic;
use crate::fetch::FetchOutcome;

/// Current serialization schema version for [`AttributionDocument`].
pub const SCHEMA_VERSION: u32 = 1;

/// Half-open `[start, end)` character range into a document's canonical text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end, "span start must not exceed end");
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    /// True when `other` lies entirely within this span.
    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

impl Serialize for Span {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(2))?;
        seq.serialize_element(&self.start)?;
        seq.serialize_element(&self.end)?;
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Span {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct SpanVisitor;
        impl<'de> Visitor<'de> for SpanVisitor {
            type Value = Span;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a [start, end) two-element integer array")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Span, A::Error> {
                let start: usize = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let end: usize = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<usize>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                if start > end {
                    return Err(de::Error::custom("span start exceeds end"));
                }
                Ok(Span { start, end })
            }
        }
        deserializer.deserialize_seq(SpanVisitor)
    }
}

/// The raw report plus its canonicalized form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceDocument {
    pub raw_text: String,
    pub canonical_text: String,
    /// File path or agent run id the report came from.
    pub origin: String,
}

/// Syntax family a citation marker was written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkerKind {
    Numbered,
    Footnote,
    InlineLink,
    Autolink,
}

/// One citation usage found in the text, prior to resolution.
///
/// Range tokens like `[1-3]` are expanded before markers are produced, so a
/// marker always carries a single label. Expanded markers share the span of
/// the range token they came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CitationMarker {
    pub kind: MarkerKind,
    /// Original label text: `"1"`, `"^note"`, link anchor text, or the
    /// autolink URL itself.
    pub label: String,
    /// Target URL for self-resolving kinds (inline links and autolinks).
    pub url: Option<String>,
    pub span: Span,
}

/// One deduplicated cited source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Citation {
    /// Dense id, 1-based, assigned in first-appearance order.
    pub id: u64,
    /// Normalized absolute URL; unique within a document.
    pub url: String,
    /// Every original label that mapped to this URL, first-seen order,
    /// exact duplicates removed.
    pub raw_labels: Vec<String>,
    /// Extracted text of the fetched page, present after a successful fetch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url_content: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fetch_outcome: Option<FetchOutcome>,
}

/// One sentence-level claim with the citations backing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribution {
    /// Dense id, 1-based, document order.
    pub id: u64,
    /// Sentence text with citation marker syntax removed and whitespace
    /// collapsed. Inline-link markers keep their anchor text.
    pub text_nocite: String,
    pub span: Span,
    /// Sorted, deduplicated citation ids; never empty.
    pub citation_ids: Vec<u64>,
    /// 1-based ordinal of the enclosing block in the parsed document.
    pub passage_id: u64,
}

/// Evaluation dimension. Order here fixes the sort order of results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    LinkWorks,
    RelevantContent,
    FactCheck,
}

impl Dimension {
    pub const ALL: [Dimension; 3] = [
        Dimension::LinkWorks,
        Dimension::RelevantContent,
        Dimension::FactCheck,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Dimension::LinkWorks => "link_works",
            Dimension::RelevantContent => "relevant_content",
            Dimension::FactCheck => "fact_check",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Binary verdict, or the marker that a verdict could not be produced.
///
/// Serialized as `0`, `1` or `null`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Score {
    Fail,
    Pass,
    NotEvaluated,
}

impl Score {
    pub fn passed(&self) -> bool {
        matches!(self, Score::Pass)
    }
}

impl Serialize for Score {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Score::Fail => serializer.serialize_u8(0),
            Score::Pass => serializer.serialize_u8(1),
            Score::NotEvaluated => serializer.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for Score {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v: Option<u8> = Option::deserialize(deserializer)?;
        match v {
            None => Ok(Score::NotEvaluated),
            Some(0) => Ok(Score::Fail),
            Some(1) => Ok(Score::Pass),
            Some(n) => Err(de::Error::custom(format!("score out of range: {n}"))),
        }
    }
}

/// Condition flags attached to an evaluation result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalFlag {
    /// The cited source answered HTTP 429; feeds adjusted pass rates.
    RateLimitedSource,
    /// The citation's fetch did not succeed, so the dimension was skipped.
    FetchFailed,
    /// The judge reply failed the output grammar at least once.
    JudgeParseRetry,
}

/// Verdict for one (attribution, citation, dimension) triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalResult {
    pub attribution_id: u64,
    pub citation_id: u64,
    pub dimension: Dimension,
    pub score: Score,
    /// Judge explanation; empty for link_works and skipped evaluations.
    pub explanation: String,
    /// Number of judge backend calls made for this result.
    pub judge_attempts: u32,
    pub flags: BTreeSet<EvalFlag>,
}

impl EvalResult {
    /// Sort key making result ordering schedule-independent.
    pub fn sort_key(&self) -> (u64, u64, Dimension) {
        (self.attribution_id, self.citation_id, self.dimension)
    }
}

/// The parsed report: citation registry, attributed claims, and (after the
/// evaluation phase) one result per pair and dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributionDocument {
    pub schema: u32,
    pub citations: Vec<Citation>,
    pub attributions: Vec<Attribution>,
    pub evals: Vec<EvalResult>,
    pub diagnostics: Vec<Diagnostic>,
    pub source: SourceDocument,
}

impl AttributionDocument {
    /// All (attribution id, citation id) pairs in document order.
    pub fn pairs(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for a in &self.attributions {
            for &c in &a.citation_ids {
                out.push((a.id, c));
            }
        }
        out
    }

    pub fn citation(&self, id: u64) -> Option<&Citation> {
        self.citations.iter().find(|c| c.id == id)
    }

    pub fn attribution(&self, id: u64) -> Option<&Attribution> {
        self.attributions.iter().find(|a| a.id == id)
    }

    /// Deterministic pretty JSON rendering with a trailing newline.
    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

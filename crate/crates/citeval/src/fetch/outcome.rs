//! Fetch outcome classification.

use serde::{Deserialize, Serialize};

/// Terminal classification of a fetch. Failures are values, never panics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FetchCategory {
    Ok,
    /// Non-2xx status that is not 403 or 429.
    HttpError { code: u16 },
    /// 403: paywalls, bot detection.
    Blocked,
    Timeout,
    /// DNS failure or connection refusal.
    Unreachable,
    /// 429.
    RateLimited,
}

impl FetchCategory {
    pub fn is_ok(&self) -> bool {
        matches!(self, FetchCategory::Ok)
    }

    /// Transient categories are retried; 4xx verdicts other than 429 are
    /// deterministic and terminal on first occurrence.
    pub fn is_transient(&self) -> bool {
        match self {
            FetchCategory::Timeout | FetchCategory::Unreachable | FetchCategory::RateLimited => {
                true
            }
            FetchCategory::HttpError { code } => (500..=599).contains(code),
            _ => false,
        }
    }
}

/// Maps a final HTTP status to its category. Total over all status codes.
pub fn classify_status(status: u16) -> FetchCategory {
    match status {
        200..=299 => FetchCategory::Ok,
        403 => FetchCategory::Blocked,
        429 => FetchCategory::RateLimited,
        code => FetchCategory::HttpError { code },
    }
}

/// Result of fetching one citation URL.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FetchOutcome {
    pub category: FetchCategory,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub http_status: Option<u16>,
    /// Total attempts made, including the first; at most 1 + max_retries.
    pub attempts: u32,
    pub elapsed_ms: u64,
    /// Extracted text, present iff category is Ok.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub content: Option<String>,
    /// URL after redirects; the citation URL stays canonical.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_url: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl FetchOutcome {
    pub fn has_content(&self) -> bool {
        self.content.as_deref().is_some_and(|c| !c.is_empty())
    }
}

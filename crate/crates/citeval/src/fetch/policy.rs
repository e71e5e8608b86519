//! Retry and truncation policy for source fetching.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FetchPolicy {
    /// Retries after the first attempt; transient failures only.
    pub max_retries: u32,
    pub retry_delay_ms: u64,
    pub timeout_ms: u64,
    /// Character limit applied to extracted content before judging.
    pub truncation_limit: usize,
    pub user_agent: String,
}

impl Default for FetchPolicy {
    fn default() -> Self {
        FetchPolicy {
            max_retries: 5,
            retry_delay_ms: 5_000,
            timeout_ms: 30_000,
            truncation_limit: 5_000,
            user_agent: concat!("citeval/", env!("CARGO_PKG_VERSION")).to_string(),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("fetch policy field `{0}` must be positive")]
pub struct PolicyError(pub &'static str);

impl FetchPolicy {
    pub fn validate(&self) -> Result<(), PolicyError> {
        if self.retry_delay_ms == 0 {
            return Err(PolicyError("retry_delay_ms"));
        }
        if self.timeout_ms == 0 {
            return Err(PolicyError("timeout_ms"));
        }
        if self.truncation_limit == 0 {
            return Err(PolicyError("truncation_limit"));
        }
        Ok(())
    }
}

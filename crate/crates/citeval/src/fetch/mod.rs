//! Source retrieval: bounded-retry fetching, outcome classification, and
//! text extraction for cited URLs.

mod extract;
mod outcome;
mod policy;
mod replay;
mod time;
mod transport;

pub use extract::{extract_text, html_to_text, truncate, Extracted};
pub use outcome::{classify_status, FetchCategory, FetchOutcome};
pub use policy::{FetchPolicy, PolicyError};
pub use replay::{CacheEntry, CacheResult, RecordingTransport, ReplayCache, ReplayTransport};
pub use time::{SystemTime, TimeSource, VirtualTime};
pub use transport::{HttpTransport, RawResponse, Transport, TransportError, MAX_REDIRECTS};

/// Fetches one URL under the policy's retry contract.
///
/// At most `1 + max_retries` attempts are made; only transient categories
/// (timeout, unreachable, 429, 5xx) retry, and no sleep follows the final
/// attempt. Every failure mode comes back as a [`FetchOutcome`] value.
pub async fn fetch(
    url: &str,
    policy: &FetchPolicy,
    transport: &dyn Transport,
    time: &dyn TimeSource,
) -> FetchOutcome {
    let started = time.now_ms();
    let mut attempts: u32 = 0;

    loop {
        attempts += 1;
        let result = transport.execute(url, policy).await;

        let (category, http_status) = match &result {
            Ok(r) => (classify_status(r.status), Some(r.status)),
            Err(TransportError::Timeout) => (FetchCategory::Timeout, None),
            Err(TransportError::Unreachable { .. }) => (FetchCategory::Unreachable, None),
        };

        if category.is_transient() && attempts <= policy.max_retries {
            time.sleep_ms(policy.retry_delay_ms).await;
            continue;
        }

        let mut notes = Vec::new();
        let mut content = None;
        let mut final_url = None;

        match result {
            Ok(response) => {
                final_url = Some(response.final_url.clone());
                if category.is_ok() {
                    let extracted = extract_text(&response.body, response.content_type.as_deref());
                    notes = extracted.notes;
                    content = Some(extracted.text);
                }
            }
            Err(TransportError::Unreachable { detail }) => notes.push(detail),
            Err(TransportError::Timeout) => {}
        }

        return FetchOutcome {
            category,
            http_status,
            attempts,
            elapsed_ms: time.now_ms().saturating_sub(started),
            content,
            final_url,
            notes,
        };
    }
}

//! HTTP transport behind the fetch engine. The trait keeps the retry logic
//! testable with fault-injection doubles and lets record-replay wrap any
//! implementation.

use async_trait::async_trait;
use reqwest::header::{CONTENT_TYPE, USER_AGENT};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::policy::FetchPolicy;

/// Redirects are followed to this depth; deeper chains fail the request.
pub const MAX_REDIRECTS: usize = 10;

/// One raw HTTP exchange after redirects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawResponse {
    pub status: u16,
    pub final_url: String,
    pub content_type: Option<String>,
    pub body: Vec<u8>,
}

/// Failures below the HTTP layer.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransportError {
    #[error("request timed out")]
    Timeout,
    #[error("unreachable: {detail}")]
    Unreachable { detail: String },
}

#[async_trait]
pub trait Transport: Send + Sync {
    async fn execute(&self, url: &str, policy: &FetchPolicy)
        -> Result<RawResponse, TransportError>;
}

/// Live HTTP client. Cookies and auth are never sent.
pub struct HttpTransport {
    client: reqwest::Client,
}

impl HttpTransport {
    pub fn new() -> Result<Self, reqwest::Error> {
        let client = reqwest::Client::builder()
            .redirect(reqwest::redirect::Policy::limited(MAX_REDIRECTS))
            .build()?;
        Ok(HttpTransport { client })
    }
}

#[async_trait]
impl Transport for HttpTransport {
    async fn execute(
        &self,
        url: &str,
        policy: &FetchPolicy,
    ) -> Result<RawResponse, TransportError> {
        let request = self
            .client
            .get(url)
            .header(USER_AGENT, &policy.user_agent)
            .timeout(std::time::Duration::from_millis(policy.timeout_ms));

        let response = match request.send().await {
            Ok(r) => r,
            Err(e) if e.is_timeout() => return Err(TransportError::Timeout),
            Err(e) if e.is_redirect() => {
                return Err(TransportError::Unreachable {
                    detail: format!("redirect limit of {MAX_REDIRECTS} exceeded"),
                })
            }
            Err(e) => {
                return Err(TransportError::Unreachable {
                    detail: e.to_string(),
                })
            }
        };

        let status = response.status().as_u16();
        let final_url = response.url().to_string();
        let content_type = response
            .headers()
            .get(CONTENT_TYPE)
            .and_then(|v| v.to_str().ok())
            .map(String::from);
        let body = match response.bytes().await {
            Ok(b) => b.to_vec(),
            Err(e) if e.is_timeout() => return Err(TransportError::Timeout),
            Err(e) => {
                return Err(TransportError::Unreachable {
                    detail: format!("body read failed: {e}"),
                })
            }
        };

        Ok(RawResponse {
            status,
            final_url,
            content_type,
            body,
        })
    }
}

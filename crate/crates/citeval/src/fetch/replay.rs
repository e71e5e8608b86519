//! Record-replay cache: persists (url -> status, headers, body) to a
//! directory of files so the full pipeline runs offline and
//! deterministically.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use async_trait::async_trait;
use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::policy::FetchPolicy;
use super::transport::{RawResponse, Transport, TransportError};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CacheEntry {
    pub url: String,
    pub result: CacheResult,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CacheResult {
    Response {
        status: u16,
        final_url: String,
        content_type: Option<String>,
        body_b64: String,
    },
    Timeout,
    Unreachable {
        detail: String,
    },
}

/// Directory-backed cache of fetch results, keyed by SHA-256 of the URL.
#[derive(Debug, Clone)]
pub struct ReplayCache {
    dir: PathBuf,
}

impl ReplayCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ReplayCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, url: &str) -> PathBuf {
        let digest = Sha256::digest(url.as_bytes());
        let mut name = String::with_capacity(69);
        for byte in digest {
            name.push_str(&format!("{byte:02x}"));
        }
        name.push_str(".json");
        self.dir.join(name)
    }

    pub fn store(&self, url: &str, result: CacheResult) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = CacheEntry {
            url: url.to_string(),
            result,
        };
        let json = serde_json::to_string_pretty(&entry).expect("cache entry serializes");
        fs::write(self.path_for(url), json)
    }

    pub fn store_response(
        &self,
        url: &str,
        status: u16,
        content_type: Option<&str>,
        body: &[u8],
    ) -> io::Result<()> {
        self.store(
            url,
            CacheResult::Response {
                status,
                final_url: url.to_string(),
                content_type: content_type.map(String::from),
                body_b64: BASE64.encode(body),
            },
        )
    }

    pub fn store_timeout(&self, url: &str) -> io::Result<()> {
        self.store(url, CacheResult::Timeout)
    }

    pub fn store_unreachable(&self, url: &str, detail: &str) -> io::Result<()> {
        self.store(
            url,
            CacheResult::Unreachable {
                detail: detail.to_string(),
            },
        )
    }

    pub fn load(&self, url: &str) -> Option<CacheEntry> {
        let text = fs::read_to_string(self.path_for(url)).ok()?;
        serde_json::from_str(&text).ok()
    }
}

fn to_transport_result(entry: CacheEntry) -> Result<RawResponse, TransportError> {
    match entry.result {
        CacheResult::Response {
            status,
            final_url,
            content_type,
            body_b64,
        } => {
            let body = BASE64.decode(body_b64.as_bytes()).unwrap_or_default();
            Ok(RawResponse {
                status,
                final_url,
                content_type,
                body,
            })
        }
        CacheResult::Timeout => Err(TransportError::Timeout),
        CacheResult::Unreachable { detail } => Err(TransportError::Unreachable { detail }),
    }
}

/// Serves fetches from the cache only; a miss is an unreachable error.
pub struct ReplayTransport {
    cache: ReplayCache,
}

impl ReplayTransport {
    pub fn new(cache: ReplayCache) -> Self {
        ReplayTransport { cache }
    }
}

#[async_trait]
impl Transport for ReplayTransport {
    async fn execute(
        &self,
        url: &str,
        _policy: &FetchPolicy,
    ) -> Result<RawResponse, TransportError> {
        match self.cache.load(url) {
            Some(entry) => to_transport_result(entry),
            None => Err(TransportError::Unreachable {
                detail: format!("replay-miss: {url}"),
            }),
        }
    }
}

/// Delegates to an inner transport and records every outcome.
pub struct RecordingTransport<T> {
    inner: T,
    cache: ReplayCache,
}

impl<T: Transport> RecordingTransport<T> {
    pub fn new(inner: T, cache: ReplayCache) -> Self {
        RecordingTransport { inner, cache }
    }
}

#[async_trait]
impl<T: Transport> Transport for RecordingTransport<T> {
    async fn execute(
        &self,
        url: &str,
        policy: &FetchPolicy,
    ) -> Result<RawResponse, TransportError> {
        let result = self.inner.execute(url, policy).await;
        let cached = match &result {
            Ok(r) => CacheResult::Response {
                status: r.status,
                final_url: r.final_url.clone(),
                content_type: r.content_type.clone(),
                body_b64: BASE64.encode(&r.body),
            },
            Err(TransportError::Timeout) => CacheResult::Timeout,
            Err(TransportError::Unreachable { detail }) => CacheResult::Unreachable {
                detail: detail.clone(),
            },
        };
        if let Err(e) = self.cache.store(url, cached) {
            tracing::warn!(url, error = %e, "failed to record fetch result");
        }
        result
    }
}

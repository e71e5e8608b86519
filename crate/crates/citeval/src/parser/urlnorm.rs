//! URL normalization backing citation deduplication.

use thiserror::Error;
use url::Url;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UrlError {
    #[error("not an absolute URL: {0}")]
    Invalid(String),
    #[error("unsupported scheme `{scheme}` in {url}")]
    Scheme { scheme: String, url: String },
}

/// Normalizes an absolute http(s) URL: scheme and host lowercased, default
/// ports dropped, fragment stripped. Query and path are preserved verbatim.
/// Idempotent.
pub fn normalize_url(raw: &str) -> Result<String, UrlError> {
    let mut url = Url::parse(raw).map_err(|_| UrlError::Invalid(raw.to_string()))?;
    match url.scheme() {
        "http" | "https" => {}
        other => {
            return Err(UrlError::Scheme {
                scheme: other.to_string(),
                url: raw.to_string(),
            })
        }
    }
    url.set_fragment(None);
    Ok(url.into())
}

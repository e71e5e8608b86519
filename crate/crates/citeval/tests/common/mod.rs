//! Test-only HTTP stub server and transport doubles shared by the
//! integration suites.

#![allow(dead_code)]

pub mod fixtures;

use std::net::SocketAddr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use async_trait::async_trait;
use tokio::io::{AsyncReadExt, AsyncWriteExt};
use tokio::net::TcpListener;

use citeval::fetch::{FetchPolicy, RawResponse, Transport, TransportError};

#[derive(Debug, Clone)]
pub struct StubResponse {
    pub status: u16,
    pub content_type: &'static str,
    pub body: Vec<u8>,
    /// Delay before answering; lets a route outlast the client timeout.
    pub delay_ms: u64,
    /// Location header for 3xx responses.
    pub location: Option<String>,
}

impl StubResponse {
    pub fn of(status: u16, body: &str) -> Self {
        StubResponse {
            status,
            content_type: "text/html",
            body: body.as_bytes().to_vec(),
            delay_ms: 0,
            location: None,
        }
    }

    pub fn slow(ms: u64) -> Self {
        StubResponse {
            delay_ms: ms,
            ..StubResponse::of(200, "eventually")
        }
    }

    pub fn redirect(to: String) -> Self {
        StubResponse {
            location: Some(to),
            ..StubResponse::of(302, "moved")
        }
    }
}

pub type Handler = Arc<dyn Fn(&str, &str) -> StubResponse + Send + Sync>;

/// Serves `handler(path, request_body)` on a fresh local port. The accept
/// loop runs until the test process exits.
pub async fn start_server(handler: Handler) -> SocketAddr {
    let listener = TcpListener::bind("127.0.0.1:0").await.expect("bind stub server");
    let addr = listener.local_addr().expect("local addr");
    tokio::spawn(async move {
        loop {
            let Ok((mut socket, _)) = listener.accept().await else {
                break;
            };
            let handler = handler.clone();
            tokio::spawn(async move {
                let mut buf = Vec::new();
                let mut chunk = [0u8; 4096];
                let (path, body) = loop {
                    match socket.read(&mut chunk).await {
                        Ok(0) => return,
                        Ok(n) => buf.extend_from_slice(&chunk[..n]),
                        Err(_) => return,
                    }
                    if let Some(parsed) = parse_request(&buf) {
                        break parsed;
                    }
                    if buf.len() > 1 << 20 {
                        return;
                    }
                };

                let response = handler(&path, &body);
                if response.delay_ms > 0 {
                    tokio::time::sleep(std::time::Duration::from_millis(response.delay_ms)).await;
                }
                let location = response
                    .location
                    .as_ref()
                    .map(|l| format!("location: {l}\r\n"))
                    .unwrap_or_default();
                let head = format!(
                    "HTTP/1.1 {} {}\r\ncontent-type: {}\r\ncontent-length: {}\r\n{}connection: close\r\n\r\n",
                    response.status,
                    reason(response.status),
                    response.content_type,
                    response.body.len(),
                    location
                );
                let _ = socket.write_all(head.as_bytes()).await;
                let _ = socket.write_all(&response.body).await;
                let _ = socket.shutdown().await;
            });
        }
    });
    addr
}

/// Returns (path, body) once the request is complete.
fn parse_request(buf: &[u8]) -> Option<(String, String)> {
    let text = String::from_utf8_lossy(buf);
    let head_end = text.find("\r\n\r\n")?;
    let head = &text[..head_end];
    let mut lines = head.lines();
    let request_line = lines.next()?;
    let path = request_line.split_whitespace().nth(1)?.to_string();
    let content_length: usize = lines
        .filter_map(|l| l.split_once(':'))
        .find(|(k, _)| k.trim().eq_ignore_ascii_case("content-length"))
        .and_then(|(_, v)| v.trim().parse().ok())
        .unwrap_or(0);
    let body_start = head_end + 4;
    if buf.len() < body_start + content_length {
        return None;
    }
    let body = String::from_utf8_lossy(&buf[body_start..body_start + content_length]).into_owned();
    Some((path, body))
}

fn reason(status: u16) -> &'static str {
    match status {
        200 => "OK",
        302 => "Found",
        403 => "Forbidden",
        404 => "Not Found",
        429 => "Too Many Requests",
        500 => "Internal Server Error",
        _ => "Status",
    }
}

/// Transport double that replays a fixed sequence of outcomes, repeating the
/// final one; counts calls and tracks peak concurrency.
pub struct ScriptedTransport {
    script: Vec<Result<RawResponse, TransportError>>,
    pub calls: Mutex<Vec<String>>,
    in_flight: AtomicUsize,
    pub peak: AtomicUsize,
}

impl ScriptedTransport {
    pub fn new(script: Vec<Result<RawResponse, TransportError>>) -> Self {
        assert!(!script.is_empty());
        ScriptedTransport {
            script,
            calls: Mutex::new(Vec::new()),
            in_flight: AtomicUsize::new(0),
            peak: AtomicUsize::new(0),
        }
    }

    pub fn total_calls(&self) -> usize {
        self.calls.lock().unwrap().len()
    }
}

#[async_trait]
impl Transport for ScriptedTransport {
    async fn execute(
        &self,
        url: &str,
        _policy: &FetchPolicy,
    ) -> Result<RawResponse, TransportError> {
        let idx = {
            let mut calls = self.calls.lock().unwrap();
            calls.push(url.to_string());
            (calls.len() - 1).min(self.script.len() - 1)
        };
        let now = self.in_flight.fetch_add(1, Ordering::SeqCst) + 1;
        self.peak.fetch_max(now, Ordering::SeqCst);
        tokio::task::yield_now().await;
        self.in_flight.fetch_sub(1, Ordering::SeqCst);
        self.script[idx].clone()
    }
}

pub fn response(status: u16, body: &str) -> Result<RawResponse, TransportError> {
    Ok(RawResponse {
        status,
        final_url: "https://stub.example/".into(),
        content_type: Some("text/plain".into()),
        body: body.as_bytes().to_vec(),
    })
}

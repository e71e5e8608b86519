//! Judge backends: a remote chat-completion endpoint plus two deterministic
//! stubs for offline tests.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use async_trait::async_trait;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::prompt::extract_sections;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JudgeError {
    /// Network-level failure; retried under the runner's retry policy.
    #[error("judge transport failure: {0}")]
    Transport(String),
    /// A scripted stub had no entry for the prompt; never retried.
    #[error("no scripted response for prompt hash {0}")]
    NotScripted(String),
}

impl JudgeError {
    pub fn is_retryable(&self) -> bool {
        matches!(self, JudgeError::Transport(_))
    }
}

/// Anything that can answer a rubric prompt with raw completion text.
///
/// Implementations must tolerate concurrent calls or serialize internally.
#[async_trait]
pub trait JudgeBackend: Send + Sync {
    async fn complete(&self, prompt: &str) -> Result<String, JudgeError>;
    fn name(&self) -> &str;
}

pub fn prompt_hash(prompt: &str) -> String {
    let digest = Sha256::digest(prompt.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Fixed map from prompt hash to response. Deterministic by construction.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ScriptedJudge {
    responses: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    default_response: Option<String>,
}

impl ScriptedJudge {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a response for the exact prompt text.
    pub fn with_response(mut self, prompt: &str, response: &str) -> Self {
        self.responses
            .insert(prompt_hash(prompt), response.to_string());
        self
    }

    /// Fallback returned for prompts without an explicit entry.
    pub fn with_default(mut self, response: &str) -> Self {
        self.default_response = Some(response.to_string());
        self
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[async_trait]
impl JudgeBackend for ScriptedJudge {
    async fn complete(&self, prompt: &str) -> Result<String, JudgeError> {
        let hash = prompt_hash(prompt);
        if let Some(r) = self.responses.get(&hash) {
            return Ok(r.clone());
        }
        match &self.default_response {
            Some(r) => Ok(r.clone()),
            None => Err(JudgeError::NotScripted(hash)),
        }
    }

    fn name(&self) -> &str {
        "scripted"
    }
}

/// Substring-containment scoring: passes when every claim token appears in
/// the content. Deterministic; used for offline pipeline tests.
#[derive(Debug, Clone, Copy, Default)]
pub struct HeuristicJudge;

impl HeuristicJudge {
    pub fn new() -> Self {
        HeuristicJudge
    }
}

fn tokens(text: &str) -> BTreeSet<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

#[async_trait]
impl JudgeBackend for HeuristicJudge {
    async fn complete(&self, prompt: &str) -> Result<String, JudgeError> {
        let Some((claim, content)) = extract_sections(prompt) else {
            return Ok("SCORE: 0\nEXPLANATION: prompt sections not found".to_string());
        };
        let claim_tokens = tokens(&claim);
        let content_tokens = tokens(&content);
        let missing: Vec<&String> = claim_tokens.difference(&content_tokens).collect();
        let score = !claim_tokens.is_empty() && missing.is_empty();
        let explanation = if score {
            format!("all {} claim tokens appear in the source", claim_tokens.len())
        } else {
            format!(
                "{} of {} claim tokens missing from the source",
                missing.len(),
                claim_tokens.len()
            )
        };
        Ok(format!("SCORE: {}\nEXPLANATION: {}", u8::from(score), explanation))
    }

    fn name(&self) -> &str {
        "heuristic"
    }
}

/// HTTP chat-completion backend. The request carries the prompt as a single
/// user message at temperature 0; the reply's first choice is the completion.
pub struct RemoteJudge {
    endpoint: String,
    model: String,
    api_key: Option<String>,
    client: reqwest::Client,
    timeout_ms: u64,
    debug_bodies: bool,
}

impl RemoteJudge {
    pub fn new(endpoint: &str, model: &str, api_key: Option<String>) -> Self {
        RemoteJudge {
            endpoint: endpoint.to_string(),
            model: model.to_string(),
            api_key,
            client: reqwest::Client::new(),
            timeout_ms: 120_000,
            debug_bodies: false,
        }
    }

    pub fn with_timeout_ms(mut self, ms: u64) -> Self {
        self.timeout_ms = ms;
        self
    }

    /// Log request/response bodies at debug level. API keys are never logged.
    pub fn with_debug_bodies(mut self, on: bool) -> Self {
        self.debug_bodies = on;
        self
    }
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    messages: Vec<ChatMessage<'a>>,
    temperature: f32,
}

#[derive(Serialize)]
struct ChatMessage<'a> {
    role: &'static str,
    content: &'a str,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<ChatChoice>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChatChoiceMessage,
}

#[derive(Deserialize)]
struct ChatChoiceMessage {
    content: String,
}

#[async_trait]
impl JudgeBackend for RemoteJudge {
    async fn complete(&self, prompt: &str) -> Result<String, JudgeError> {
        let body = ChatRequest {
            model: &self.model,
            messages: vec![ChatMessage {
                role: "user",
                content: prompt,
            }],
            temperature: 0.0,
        };
        if self.debug_bodies {
            tracing::debug!(
                endpoint = %self.endpoint,
                model = %self.model,
                request = %serde_json::to_string(&body).unwrap_or_default(),
                "judge request"
            );
        }

        let mut request = self
            .client
            .post(&self.endpoint)
            .timeout(std::time::Duration::from_millis(self.timeout_ms))
            .json(&body);
        if let Some(key) = &self.api_key {
            request = request.bearer_auth(key);
        }

        let response = request
            .send()
            .await
            .map_err(|e| JudgeError::Transport(e.to_string()))?;
        let status = response.status();
        let text = response
            .text()
            .await
            .map_err(|e| JudgeError::Transport(e.to_string()))?;
        if self.debug_bodies {
            tracing::debug!(status = status.as_u16(), response = %text, "judge response");
        }
        if !status.is_success() {
            return Err(JudgeError::Transport(format!(
                "judge endpoint returned {status}"
            )));
        }

        let parsed: ChatResponse = serde_json::from_str(&text)
            .map_err(|e| JudgeError::Transport(format!("malformed completion body: {e}")))?;
        parsed
            .choices
            .into_iter()
            .next()
            .map(|c| c.message.content)
            .ok_or_else(|| JudgeError::Transport("completion had no choices".to_string()))
    }

    fn name(&self) -> &str {
        "remote"
    }
}

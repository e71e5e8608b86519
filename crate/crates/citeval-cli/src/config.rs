//! CLI configuration: JSON config file merged under command-line flags.
//! Secrets come only from the environment, never from flags.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use citeval::judge::{HeuristicJudge, JudgeBackend, RemoteJudge, ScriptedJudge};
use citeval::runner::RunConfig;
use citeval::types::Dimension;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct FileConfig {
    pub judge: JudgeSettings,
    pub run: RunOverrides,
    pub output_dir: Option<PathBuf>,
    pub replay_cache: Option<PathBuf>,
    pub verbosity: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct JudgeSettings {
    /// heuristic | scripted | remote
    pub backend: Option<String>,
    pub endpoint: Option<String>,
    pub model: Option<String>,
    /// Name of the environment variable holding the API key.
    pub api_key_env: Option<String>,
    pub scripted_path: Option<PathBuf>,
}

/// Partial RunConfig; unset fields fall back to defaults.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct RunOverrides {
    pub evaluator_concurrency: Option<usize>,
    pub agent_concurrency: Option<usize>,
    pub max_retries: Option<u32>,
    pub retry_delay_ms: Option<u64>,
    pub timeout_ms: Option<u64>,
    pub truncation_limit: Option<usize>,
    pub user_agent: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("config file {} is not valid JSON", path.display()))
    }

    pub fn apply_run_overrides(&self, config: &mut RunConfig) {
        let o = &self.run;
        if let Some(v) = o.evaluator_concurrency {
            config.evaluator_concurrency = v;
        }
        if let Some(v) = o.agent_concurrency {
            config.agent_concurrency = v;
        }
        if let Some(v) = o.max_retries {
            config.fetch_policy.max_retries = v;
        }
        if let Some(v) = o.retry_delay_ms {
            config.fetch_policy.retry_delay_ms = v;
        }
        if let Some(v) = o.timeout_ms {
            config.fetch_policy.timeout_ms = v;
        }
        if let Some(v) = o.truncation_limit {
            config.fetch_policy.truncation_limit = v;
        }
        if let Some(v) = &o.user_agent {
            config.fetch_policy.user_agent = v.clone();
        }
    }
}

/// Parses `--dims link,relevant,fact` (full names also accepted).
pub fn parse_dimensions(spec: &str) -> Result<Vec<Dimension>> {
    let mut dims = Vec::new();
    for part in spec.split(',') {
        let dim = match part.trim().to_lowercase().as_str() {
            "link" | "link_works" => Dimension::LinkWorks,
            "relevant" | "relevance" | "relevant_content" => Dimension::RelevantContent,
            "fact" | "factcheck" | "fact_check" => Dimension::FactCheck,
            other => bail!("unknown dimension `{other}` (expected link, relevant, fact)"),
        };
        if !dims.contains(&dim) {
            dims.push(dim);
        }
    }
    if dims.is_empty() {
        bail!("dimension list is empty");
    }
    Ok(dims)
}

/// Builds the judge backend from the CLI selector and config file.
/// Selector grammar: `heuristic`, `scripted:<path>`, or `remote`.
pub fn build_judge(selector: Option<&str>, file: &FileConfig) -> Result<(Arc<dyn JudgeBackend>, String)> {
    let chosen = selector
        .map(String::from)
        .or_else(|| file.judge.backend.clone())
        .unwrap_or_else(|| "heuristic".to_string());

    if let Some(path) = chosen.strip_prefix("scripted:") {
        return load_scripted(Path::new(path));
    }
    match chosen.as_str() {
        "heuristic" => Ok((Arc::new(HeuristicJudge::new()), "heuristic".to_string())),
        "scripted" => {
            let path = file
                .judge
                .scripted_path
                .as_ref()
                .context("scripted judge selected but no scripted_path configured")?;
            load_scripted(path)
        }
        "remote" => {
            let endpoint = file
                .judge
                .endpoint
                .as_ref()
                .context("remote judge needs judge.endpoint in the config file")?;
            let model = file
                .judge
                .model
                .as_ref()
                .context("remote judge needs judge.model in the config file")?;
            let api_key = match &file.judge.api_key_env {
                Some(var) => std::env::var(var).ok(),
                None => None,
            };
            let label = format!("remote:{model}");
            Ok((Arc::new(RemoteJudge::new(endpoint, model, api_key)), label))
        }
        other => bail!("unknown judge backend `{other}` (expected heuristic, scripted:<path>, remote)"),
    }
}

fn load_scripted(path: &Path) -> Result<(Arc<dyn JudgeBackend>, String)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read scripted judge map {}", path.display()))?;
    let judge = ScriptedJudge::from_json(&text)
        .with_context(|| format!("scripted judge map {} is not valid JSON", path.display()))?;
    Ok((Arc::new(judge), format!("scripted:{}", path.display())))
}

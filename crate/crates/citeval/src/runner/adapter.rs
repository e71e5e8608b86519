//! Report acquisition. The research agent itself is external: reports come
//! from pre-generated files or from a configured command template with
//! `{query}` and `{budget}` placeholders.

use std::path::PathBuf;

use async_trait::async_trait;
use thiserror::Error;

use crate::fetch::TimeSource;

use super::config::QuerySpec;

/// Anything that can produce the report for a query. The batch runner bounds
/// concurrent acquisitions through this interface, so instrumented doubles
/// can be substituted in tests.
#[async_trait]
pub trait ReportAcquirer: Send + Sync {
    async fn acquire(
        &self,
        spec: &QuerySpec,
        budget: Option<u64>,
        time: &dyn TimeSource,
    ) -> Result<AcquiredReport, (AdapterError, u32)>;
}

#[derive(Debug, Clone)]
pub enum AdapterMode {
    /// Reports live at `<dir>/<query_id>.md` unless the spec names a path.
    ReportDir(PathBuf),
    /// Whitespace-split command template; placeholders are substituted per
    /// argument, so queries with spaces stay single arguments. No shell.
    Command { template: String },
}

#[derive(Debug, Clone)]
pub struct AgentAdapter {
    mode: AdapterMode,
    max_retries: u32,
    retry_delay_ms: u64,
}

#[derive(Debug, Clone)]
pub struct AcquiredReport {
    pub text: String,
    pub origin: String,
    pub attempts: u32,
}

#[derive(Debug, Error)]
pub enum AdapterError {
    #[error("report not readable at {path}: {detail}")]
    Missing { path: String, detail: String },
    #[error("agent command failed: {0}")]
    CommandFailed(String),
    #[error("command template uses {{budget}} but no budget was configured")]
    BudgetRequired,
    #[error("command template is empty")]
    EmptyTemplate,
}

impl AgentAdapter {
    pub fn new(mode: AdapterMode, max_retries: u32, retry_delay_ms: u64) -> Self {
        AgentAdapter {
            mode,
            max_retries,
            retry_delay_ms,
        }
    }

    pub fn report_dir(dir: impl Into<PathBuf>, max_retries: u32, retry_delay_ms: u64) -> Self {
        Self::new(AdapterMode::ReportDir(dir.into()), max_retries, retry_delay_ms)
    }

    pub fn command(template: &str, max_retries: u32, retry_delay_ms: u64) -> Self {
        Self::new(
            AdapterMode::Command {
                template: template.to_string(),
            },
            max_retries,
            retry_delay_ms,
        )
    }

    async fn try_once(
        &self,
        spec: &QuerySpec,
        budget: Option<u64>,
    ) -> Result<(String, String), AdapterError> {
        if let Some(path) = &spec.report_path {
            return read_report(path.clone()).await;
        }
        match &self.mode {
            AdapterMode::ReportDir(dir) => {
                read_report(dir.join(format!("{}.md", spec.query_id))).await
            }
            AdapterMode::Command { template } => run_command(template, spec, budget).await,
        }
    }
}

#[async_trait]
impl ReportAcquirer for AgentAdapter {
    /// Fetches the report for one query, retrying failures per policy.
    async fn acquire(
        &self,
        spec: &QuerySpec,
        budget: Option<u64>,
        time: &dyn TimeSource,
    ) -> Result<AcquiredReport, (AdapterError, u32)> {
        let mut attempts = 0;
        loop {
            attempts += 1;
            match self.try_once(spec, budget).await {
                Ok((text, origin)) => {
                    return Ok(AcquiredReport {
                        text,
                        origin,
                        attempts,
                    })
                }
                Err(e) => {
                    if attempts > self.max_retries {
                        return Err((e, attempts));
                    }
                    time.sleep_ms(self.retry_delay_ms).await;
                }
            }
        }
    }
}

async fn read_report(path: PathBuf) -> Result<(String, String), AdapterError> {
    match tokio::fs::read_to_string(&path).await {
        Ok(text) => Ok((text, path.display().to_string())),
        Err(e) => Err(AdapterError::Missing {
            path: path.display().to_string(),
            detail: e.to_string(),
        }),
    }
}

async fn run_command(
    template: &str,
    spec: &QuerySpec,
    budget: Option<u64>,
) -> Result<(String, String), AdapterError> {
    let argv = substitute_template(template, &spec.query, budget)?;
    let (program, args) = argv.split_first().ok_or(AdapterError::EmptyTemplate)?;

    let output = tokio::process::Command::new(program)
        .args(args)
        .output()
        .await
        .map_err(|e| AdapterError::CommandFailed(format!("spawn `{program}`: {e}")))?;

    if !output.status.success() {
        return Err(AdapterError::CommandFailed(format!(
            "`{program}` exited with {}: {}",
            output.status,
            String::from_utf8_lossy(&output.stderr).trim()
        )));
    }
    let text = String::from_utf8_lossy(&output.stdout).into_owned();
    Ok((text, format!("command:{}", spec.query_id)))
}

/// Splits the template on whitespace, then substitutes placeholders inside
/// each argument.
pub fn substitute_template(
    template: &str,
    query: &str,
    budget: Option<u64>,
) -> Result<Vec<String>, AdapterError> {
    let needs_budget = template.contains("{budget}");
    let budget_text = match (needs_budget, budget) {
        (true, None) => return Err(AdapterError::BudgetRequired),
        (true, Some(b)) => b.to_string(),
        (false, _) => String::new(),
    };
    let argv: Vec<String> = template
        .split_whitespace()
        .map(|arg| arg.replace("{query}", query).replace("{budget}", &budget_text))
        .collect();
    if argv.is_empty() {
        return Err(AdapterError::EmptyTemplate);
    }
    Ok(argv)
}

//! citeval command line: parse reports, evaluate citations, aggregate
//! reports, run search-depth ablations.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 judge backend
//! unreachable for every call.

mod config;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgAction, Parser, Subcommand};

use citeval::fetch::{
    HttpTransport, RecordingTransport, ReplayCache, ReplayTransport, SystemTime as WallClock,
    TimeSource, Transport, VirtualTime,
};
use citeval::metrics::{
    ablation_table, render_ablation_csv, render_ablation_markdown, render_comparison,
    MetricsReport, ReportFormat,
};
use citeval::parser::parse_document;
use citeval::runner::{
    evaluate_parsed, load_manifest, run_ablation, run_batch, write_run_dir, AgentAdapter,
    PipelineEnv, RunConfig, RunRecord, RunStats, DEFAULT_ABLATION_BUDGETS,
};
use citeval::types::AttributionDocument;

use config::{build_judge, parse_dimensions, FileConfig};

#[derive(Parser)]
#[command(name = "citeval", version, about = "Citation extraction and source attribution evaluation")]
struct Cli {
    /// JSON config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Resolve relative paths against this directory.
    #[arg(long, global = true)]
    workdir: Option<PathBuf>,

    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a Markdown report into a document JSON (no network).
    Parse {
        /// Input Markdown file.
        input: PathBuf,
        /// Output path; defaults to `<input>.document.json`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Origin label recorded in the document.
        #[arg(long)]
        origin: Option<String>,
    },

    /// Fetch cited sources and evaluate a parsed document or a batch.
    Evaluate {
        /// A single parsed document JSON.
        #[arg(long, conflicts_with = "manifest")]
        doc: Option<PathBuf>,
        /// A batch manifest: JSON list of {query_id, query, report_path?}.
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Comma-separated dimensions: link, relevant, fact.
        #[arg(long)]
        dims: Option<String>,
        /// Judge backend: heuristic, scripted:<map.json>, remote.
        #[arg(long)]
        judge: Option<String>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        run_id: Option<String>,
        /// Serve fetches from this cache directory (offline).
        #[arg(long)]
        replay_cache: Option<PathBuf>,
        /// With --replay-cache: fetch live and record into the cache.
        #[arg(long)]
        record: bool,
        /// Directory of pre-generated reports, `<query_id>.md` each.
        #[arg(long)]
        reports_dir: Option<PathBuf>,
        /// Agent command template with {query} and {budget} placeholders.
        #[arg(long)]
        agent_cmd: Option<String>,
        #[arg(long)]
        evaluator_concurrency: Option<usize>,
        #[arg(long)]
        agent_concurrency: Option<usize>,
        #[arg(long)]
        max_retries: Option<u32>,
        #[arg(long)]
        retry_delay_ms: Option<u64>,
        #[arg(long)]
        timeout_ms: Option<u64>,
    },

    /// Aggregate completed runs into one table.
    Report {
        /// Directory containing run directories with report.json files.
        #[arg(long)]
        runs: PathBuf,
        /// json, markdown, or csv.
        #[arg(long, default_value = "markdown")]
        format: String,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Run the batch once per tool-call budget and emit ablation tables.
    Ablate {
        /// Batch manifest of queries.
        #[arg(long)]
        queries: PathBuf,
        /// Agent command template; required (command-mode only).
        #[arg(long)]
        agent_cmd: Option<String>,
        /// Comma-separated budgets; defaults to 2,10,30,50,70,100,150.
        #[arg(long)]
        budgets: Option<String>,
        #[arg(long)]
        dims: Option<String>,
        #[arg(long)]
        judge: Option<String>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        run_id: Option<String>,
        #[arg(long)]
        replay_cache: Option<PathBuf>,
        #[arg(long)]
        record: bool,
        #[arg(long)]
        evaluator_concurrency: Option<usize>,
        #[arg(long)]
        max_retries: Option<u32>,
        #[arg(long)]
        retry_delay_ms: Option<u64>,
        #[arg(long)]
        timeout_ms: Option<u64>,
    },
}

/// Failure modes with distinct exit codes.
enum CliError {
    /// Exit 2.
    Usage(anyhow::Error),
    /// Exit 3: the judge backend failed in transport for every call.
    BackendDown(String),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Usage(e)
    }
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = Cli::parse();

    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let filter = tracing_subscriber::EnvFilter::try_from_default_env()
        .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new(level));
    tracing_subscriber::fmt()
        .with_env_filter(filter)
        .with_writer(std::io::stderr)
        .init();

    if let Some(workdir) = &cli.workdir {
        if let Err(e) = std::env::set_current_dir(workdir) {
            eprintln!("error: cannot enter workdir {}: {e}", workdir.display());
            return 2;
        }
    }

    let runtime = match tokio::runtime::Runtime::new() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: cannot start runtime: {e}");
            return 2;
        }
    };

    match runtime.block_on(dispatch(cli)) {
        Ok(()) => 0,
        Err(CliError::Usage(e)) => {
            eprintln!("error: {e:#}");
            2
        }
        Err(CliError::BackendDown(message)) => {
            eprintln!("error: {message}");
            3
        }
    }
}

async fn dispatch(cli: Cli) -> Result<(), CliError> {
    let file_config = match &cli.config {
        Some(path) => FileConfig::load(path).map_err(CliError::Usage)?,
        None => FileConfig::default(),
    };

    match cli.command {
        Command::Parse { input, out, origin } => cmd_parse(input, out, origin).map_err(CliError::Usage),
        Command::Evaluate {
            doc,
            manifest,
            dims,
            judge,
            out_dir,
            run_id,
            replay_cache,
            record,
            reports_dir,
            agent_cmd,
            evaluator_concurrency,
            agent_concurrency,
            max_retries,
            retry_delay_ms,
            timeout_ms,
        } => {
            let options = EvalOptions {
                dims,
                judge,
                out_dir,
                run_id,
                replay_cache,
                record,
                evaluator_concurrency,
                agent_concurrency,
                max_retries,
                retry_delay_ms,
                timeout_ms,
            };
            cmd_evaluate(doc, manifest, reports_dir, agent_cmd, options, &file_config).await
        }
        Command::Report { runs, format, out } => cmd_report(runs, &format, out).map_err(CliError::Usage),
        Command::Ablate {
            queries,
            agent_cmd,
            budgets,
            dims,
            judge,
            out_dir,
            run_id,
            replay_cache,
            record,
            evaluator_concurrency,
            max_retries,
            retry_delay_ms,
            timeout_ms,
        } => {
            let options = EvalOptions {
                dims,
                judge,
                out_dir,
                run_id,
                replay_cache,
                record,
                evaluator_concurrency,
                agent_concurrency: None,
                max_retries,
                retry_delay_ms,
                timeout_ms,
            };
            cmd_ablate(queries, agent_cmd, budgets, options, &file_config).await
        }
    }
}

fn cmd_parse(input: PathBuf, out: Option<PathBuf>, origin: Option<String>) -> Result<()> {
    let raw = std::fs::read_to_string(&input)
        .with_context(|| format!("cannot read report {}", input.display()))?;
    let origin = origin.unwrap_or_else(|| input.display().to_string());
    let document = parse_document(&raw, &origin);

    let out = out.unwrap_or_else(|| {
        let mut p = input.clone();
        p.set_extension("document.json");
        p
    });
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)
            .with_context(|| format!("cannot create output directory {}", parent.display()))?;
    }
    std::fs::write(&out, document.to_json().expect("document serializes"))
        .with_context(|| format!("cannot write {}", out.display()))?;

    println!(
        "parsed {}: {} citations, {} attributions, {} pairs, {} diagnostics -> {}",
        origin,
        document.citations.len(),
        document.attributions.len(),
        document.pairs().len(),
        document.diagnostics.len(),
        out.display()
    );
    Ok(())
}

struct EvalOptions {
    dims: Option<String>,
    judge: Option<String>,
    out_dir: Option<PathBuf>,
    run_id: Option<String>,
    replay_cache: Option<PathBuf>,
    record: bool,
    evaluator_concurrency: Option<usize>,
    agent_concurrency: Option<usize>,
    max_retries: Option<u32>,
    retry_delay_ms: Option<u64>,
    timeout_ms: Option<u64>,
}

struct Session {
    config: RunConfig,
    env: PipelineEnv,
    out_dir: PathBuf,
    run_id: String,
    /// True when fetches replay deterministically (no wall-clock stamps).
    deterministic: bool,
}

fn build_session(options: &EvalOptions, file: &FileConfig) -> Result<Session> {
    let mut config = RunConfig::default();
    file.apply_run_overrides(&mut config);
    if let Some(v) = options.evaluator_concurrency {
        config.evaluator_concurrency = v;
    }
    if let Some(v) = options.agent_concurrency {
        config.agent_concurrency = v;
    }
    if let Some(v) = options.max_retries {
        config.fetch_policy.max_retries = v;
    }
    if let Some(v) = options.retry_delay_ms {
        config.fetch_policy.retry_delay_ms = v;
    }
    if let Some(v) = options.timeout_ms {
        config.fetch_policy.timeout_ms = v;
    }
    if let Some(spec) = &options.dims {
        config.dimensions = parse_dimensions(spec)?.into_iter().collect();
    }
    config
        .fetch_policy
        .validate()
        .map_err(|e| anyhow!("invalid fetch policy: {e}"))?;
    config.validate().map_err(|e| anyhow!("invalid run config: {e}"))?;

    let (judge, judge_label) = build_judge(options.judge.as_deref(), file)?;
    config.judge_label = judge_label;

    let replay_dir = options.replay_cache.clone().or_else(|| file.replay_cache.clone());
    let (transport, deterministic): (Arc<dyn Transport>, bool) = match (&replay_dir, options.record)
    {
        (Some(dir), false) => (
            Arc::new(ReplayTransport::new(ReplayCache::new(dir.clone()))),
            true,
        ),
        (Some(dir), true) => (
            Arc::new(RecordingTransport::new(
                HttpTransport::new().context("cannot build HTTP client")?,
                ReplayCache::new(dir.clone()),
            )),
            false,
        ),
        (None, _) => (
            Arc::new(HttpTransport::new().context("cannot build HTTP client")?),
            false,
        ),
    };
    let time: Arc<dyn TimeSource> = if deterministic {
        Arc::new(VirtualTime::new())
    } else {
        Arc::new(WallClock::new())
    };

    let out_dir = options
        .out_dir
        .clone()
        .or_else(|| file.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("runs"));
    let run_id = options.run_id.clone().unwrap_or_else(default_run_id);

    Ok(Session {
        config,
        env: PipelineEnv {
            transport,
            judge,
            time,
        },
        out_dir,
        run_id,
        deterministic,
    })
}

fn default_run_id() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("run-{secs}")
}

fn timestamp(deterministic: bool) -> Option<String> {
    if deterministic {
        return None;
    }
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .ok()
        .map(|d| format!("unix:{}", d.as_secs()))
}

/// Exit-3 rule: at least one judged evaluation happened and every one of
/// them died in transport.
fn backend_down(stats: &[RunStats]) -> bool {
    let judged: u64 = stats.iter().map(|s| s.judged_evals).sum();
    let exhausted: u64 = stats.iter().map(|s| s.judge_transport_exhausted).sum();
    judged > 0 && judged == exhausted
}

async fn cmd_evaluate(
    doc: Option<PathBuf>,
    manifest: Option<PathBuf>,
    reports_dir: Option<PathBuf>,
    agent_cmd: Option<String>,
    options: EvalOptions,
    file: &FileConfig,
) -> Result<(), CliError> {
    let session = build_session(&options, file).map_err(CliError::Usage)?;

    let records: Vec<RunRecord> = match (&doc, &manifest) {
        (Some(doc_path), None) => {
            let text = std::fs::read_to_string(doc_path)
                .with_context(|| format!("cannot read document {}", doc_path.display()))
                .map_err(CliError::Usage)?;
            let document = AttributionDocument::from_json(&text)
                .with_context(|| format!("{} is not a document JSON", doc_path.display()))
                .map_err(CliError::Usage)?;
            let query_id = doc_path
                .file_name()
                .and_then(|n| n.to_str())
                .unwrap_or("document")
                .trim_end_matches(".document.json")
                .trim_end_matches(".json")
                .to_string();
            let sem = Arc::new(tokio::sync::Semaphore::new(
                session.config.evaluator_concurrency,
            ));
            let output =
                evaluate_parsed(document, &session.config, &session.env, sem).await;
            let success = !output.document.pairs().is_empty();
            vec![RunRecord {
                query_id,
                query: String::new(),
                origin: doc_path.display().to_string(),
                document: output.document,
                success,
                generation_attempts: 0,
                generation_error: None,
                stats: output.stats,
            }]
        }
        (None, Some(manifest_path)) => {
            let specs =
                load_manifest(manifest_path).map_err(|e| CliError::Usage(anyhow!("{e}")))?;
            if specs.is_empty() {
                return Err(CliError::Usage(anyhow!("manifest lists no queries")));
            }
            let adapter = match &agent_cmd {
                Some(template) => AgentAdapter::command(
                    template,
                    session.config.fetch_policy.max_retries,
                    session.config.fetch_policy.retry_delay_ms,
                ),
                None => {
                    let dir = reports_dir
                        .clone()
                        .or_else(|| manifest_path.parent().map(Path::to_path_buf))
                        .unwrap_or_else(|| PathBuf::from("."));
                    AgentAdapter::report_dir(
                        dir,
                        session.config.fetch_policy.max_retries,
                        session.config.fetch_policy.retry_delay_ms,
                    )
                }
            };
            run_batch(&specs, &session.config, &session.env, &adapter).await
        }
        _ => {
            return Err(CliError::Usage(anyhow!(
                "exactly one of --doc or --manifest is required"
            )))
        }
    };

    let dir = write_outputs(&session, &records).map_err(CliError::Usage)?;
    let stats: Vec<RunStats> = records.iter().map(|r| r.stats).collect();
    println!(
        "evaluated {} document(s): {} successful -> {}",
        records.len(),
        records.iter().filter(|r| r.success).count(),
        dir.display()
    );
    if backend_down(&stats) {
        return Err(CliError::BackendDown(
            "judge backend was unreachable for every call".to_string(),
        ));
    }
    Ok(())
}

/// Writes documents, manifest, and the three report renderings; returns the
/// run directory.
fn write_outputs(session: &Session, records: &[RunRecord]) -> Result<PathBuf> {
    let dir = write_run_dir(
        &session.out_dir,
        &session.run_id,
        &session.config,
        records,
        timestamp(session.deterministic),
    )
    .context("cannot write run directory")?;

    let docs: Vec<&AttributionDocument> = records.iter().map(|r| &r.document).collect();
    let report = MetricsReport::from_documents(&session.run_id, &docs);
    write_report_files(&dir, &report)?;
    Ok(dir)
}

fn write_report_files(dir: &Path, report: &MetricsReport) -> Result<()> {
    std::fs::write(dir.join("report.json"), report.to_json().expect("report serializes"))?;
    let single = std::slice::from_ref(report);
    std::fs::write(
        dir.join("report.md"),
        render_comparison(single, ReportFormat::Markdown).expect("markdown renders"),
    )?;
    std::fs::write(
        dir.join("report.csv"),
        render_comparison(single, ReportFormat::Csv).expect("csv renders"),
    )?;
    Ok(())
}

fn cmd_report(runs: PathBuf, format: &str, out: Option<PathBuf>) -> Result<()> {
    let format: ReportFormat = format
        .parse()
        .map_err(|e| anyhow!("{e} (expected json, markdown, or csv)"))?;

    let mut reports = Vec::new();
    let mut paths = vec![runs.join("report.json")];
    if let Ok(entries) = std::fs::read_dir(&runs) {
        for entry in entries.flatten() {
            paths.push(entry.path().join("report.json"));
        }
    }
    for path in paths {
        if let Ok(text) = std::fs::read_to_string(&path) {
            let report = MetricsReport::from_json(&text)
                .with_context(|| format!("{} is not a metrics report", path.display()))?;
            reports.push(report);
        }
    }
    if reports.is_empty() {
        bail!("no completed runs under {}", runs.display());
    }

    let rendered = render_comparison(&reports, format).expect("report renders");
    match out {
        Some(path) => {
            std::fs::write(&path, rendered)
                .with_context(|| format!("cannot write {}", path.display()))?;
            println!("wrote {} run(s) -> {}", reports.len(), path.display());
        }
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&rendered)?;
        }
    }
    Ok(())
}

async fn cmd_ablate(
    queries: PathBuf,
    agent_cmd: Option<String>,
    budgets: Option<String>,
    options: EvalOptions,
    file: &FileConfig,
) -> Result<(), CliError> {
    let template = agent_cmd.ok_or_else(|| {
        CliError::Usage(anyhow!("--agent-cmd is required: ablation runs the agent per budget"))
    })?;
    let budgets = match budgets {
        Some(spec) => parse_budgets(&spec).map_err(CliError::Usage)?,
        None => DEFAULT_ABLATION_BUDGETS.to_vec(),
    };
    let session = build_session(&options, file).map_err(CliError::Usage)?;
    let specs = load_manifest(&queries).map_err(|e| CliError::Usage(anyhow!("{e}")))?;
    if specs.is_empty() {
        return Err(CliError::Usage(anyhow!("manifest lists no queries")));
    }

    let adapter = AgentAdapter::command(
        &template,
        session.config.fetch_policy.max_retries,
        session.config.fetch_policy.retry_delay_ms,
    );
    let groups = run_ablation(&specs, &budgets, &session.config, &session.env, &adapter).await;

    let base = session.out_dir.join(&session.run_id);
    let mut reports = BTreeMap::new();
    let mut all_stats = Vec::new();
    for (budget, records) in &groups {
        let budget_dir = base.join("budgets");
        let mut cfg = session.config.clone();
        cfg.tool_call_budget = Some(*budget);
        write_run_dir(
            &budget_dir,
            &format!("budget-{budget}"),
            &cfg,
            records,
            timestamp(session.deterministic),
        )
        .context("cannot write budget run directory")
        .map_err(CliError::Usage)?;

        let docs: Vec<&AttributionDocument> = records.iter().map(|r| &r.document).collect();
        let report = MetricsReport::from_documents(&format!("budget-{budget}"), &docs);
        write_report_files(&budget_dir.join(format!("budget-{budget}")), &report)
            .map_err(CliError::Usage)?;
        reports.insert(*budget, report);
        all_stats.extend(records.iter().map(|r| r.stats));
    }

    std::fs::create_dir_all(&base)
        .context("cannot create ablation output directory")
        .map_err(CliError::Usage)?;
    std::fs::write(base.join("ablation.csv"), render_ablation_csv(&reports))
        .context("cannot write ablation.csv")
        .map_err(CliError::Usage)?;
    std::fs::write(base.join("ablation.md"), render_ablation_markdown(&reports))
        .context("cannot write ablation.md")
        .map_err(CliError::Usage)?;

    // cross-budget summary with per-budget rows attached
    let all_docs: Vec<&AttributionDocument> = groups
        .values()
        .flatten()
        .map(|r| &r.document)
        .collect();
    let mut summary = MetricsReport::from_documents(&session.run_id, &all_docs);
    summary.budget_rows = Some(ablation_table(&reports));
    std::fs::write(
        base.join("report.json"),
        summary.to_json().expect("summary serializes"),
    )
    .context("cannot write ablation summary")
    .map_err(CliError::Usage)?;

    println!(
        "ablation over {} budget(s) x {} query(ies) -> {}",
        groups.len(),
        specs.len(),
        base.display()
    );
    if backend_down(&all_stats) {
        return Err(CliError::BackendDown(
            "judge backend was unreachable for every call".to_string(),
        ));
    }
    Ok(())
}

fn parse_budgets(spec: &str) -> Result<Vec<u64>> {
    let mut budgets = Vec::new();
    for part in spec.split(',') {
        let value: u64 = part
            .trim()
            .parse()
            .with_context(|| format!("malformed budget `{part}`"))?;
        if value == 0 {
            bail!("budgets must be positive");
        }
        if !budgets.contains(&value) {
            budgets.push(value);
        }
    }
    if budgets.is_empty() {
        bail!("budget list is empty");
    }
    Ok(budgets)
}

//! End-to-end CLI tests: exit codes, file outputs, determinism over a
//! replay cache.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use citeval::fetch::ReplayCache;
use citeval::types::{AttributionDocument, Dimension};

fn citeval_cmd() -> Command {
    Command::new(env!("CARGO_BIN_EXE_citeval"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    citeval_cmd()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write_fixture_report(dir: &Path) -> PathBuf {
    let path = dir.join("report.md");
    std::fs::write(
        &path,
        "Alpha facts appear plainly here. [1] Beta numbers differ somewhat. [2]\n\n\
         [1]: https://alpha.example/a\n[2]: https://beta.example/b\n",
    )
    .unwrap();
    path
}

/// Cache where the alpha source passes the heuristic judge and beta 404s.
fn write_cache(dir: &Path) -> PathBuf {
    let cache_dir = dir.join("cache");
    let cache = ReplayCache::new(&cache_dir);
    cache
        .store_response(
            "https://alpha.example/a",
            200,
            Some("text/plain"),
            b"alpha facts appear plainly here with surrounding context",
        )
        .unwrap();
    cache
        .store_response("https://beta.example/b", 404, Some("text/html"), b"")
        .unwrap();
    cache_dir
}

#[test]
fn parse_writes_deterministic_document() {
    let dir = tempfile::tempdir().unwrap();
    let report = write_fixture_report(dir.path());

    let out1 = run(
        &["parse", report.to_str().unwrap(), "--out", "a.json", "--origin", "fixture"],
        dir.path(),
    );
    assert!(out1.status.success(), "{out1:?}");
    let stdout = String::from_utf8_lossy(&out1.stdout);
    assert!(stdout.contains("2 citations"), "counts printed: {stdout}");
    assert!(stdout.contains("2 attributions"));

    let out2 = run(
        &["parse", report.to_str().unwrap(), "--out", "b.json", "--origin", "fixture"],
        dir.path(),
    );
    assert!(out2.status.success());

    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b, "parse output must be byte-identical across runs");

    let doc = AttributionDocument::from_json(&String::from_utf8(a).unwrap()).unwrap();
    assert_eq!(doc.schema, 1);
    assert_eq!(doc.citations.len(), 2);
}

#[test]
fn parse_missing_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["parse", "no-such-report.md"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn evaluate_doc_over_replay_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let report = write_fixture_report(dir.path());
    let cache = write_cache(dir.path());

    let parse = run(
        &["parse", report.to_str().unwrap(), "--out", "doc.json"],
        dir.path(),
    );
    assert!(parse.status.success());

    let args = [
        "evaluate",
        "--doc",
        "doc.json",
        "--judge",
        "heuristic",
        "--replay-cache",
        cache.to_str().unwrap(),
        "--out-dir",
        "runs",
        "--run-id",
        "fixed",
        "--max-retries",
        "0",
    ];
    let first = run(&args, dir.path());
    assert!(first.status.success(), "{first:?}");

    let run_dir = dir.path().join("runs/fixed");
    let artifacts = ["doc.document.json", "manifest.json", "report.json", "report.md", "report.csv"];
    let snapshot: Vec<Vec<u8>> = artifacts
        .iter()
        .map(|f| std::fs::read(run_dir.join(f)).unwrap_or_else(|_| panic!("missing {f}")))
        .collect();

    let second = run(&args, dir.path());
    assert!(second.status.success());
    for (file, before) in artifacts.iter().zip(&snapshot) {
        let after = std::fs::read(run_dir.join(file)).unwrap();
        assert_eq!(&after, before, "{file} changed across identical reruns");
    }

    // completed document holds 2 pairs x 3 dimensions
    let doc = AttributionDocument::from_json(
        &std::fs::read_to_string(run_dir.join("doc.document.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(doc.evals.len(), 6);
}

#[test]
fn evaluate_dims_link_only() {
    let dir = tempfile::tempdir().unwrap();
    let report = write_fixture_report(dir.path());
    let cache = write_cache(dir.path());
    run(&["parse", report.to_str().unwrap(), "--out", "doc.json"], dir.path());

    let out = run(
        &[
            "evaluate",
            "--doc",
            "doc.json",
            "--dims",
            "link",
            "--replay-cache",
            cache.to_str().unwrap(),
            "--out-dir",
            "runs",
            "--run-id",
            "linkonly",
            "--max-retries",
            "0",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let doc = AttributionDocument::from_json(
        &std::fs::read_to_string(dir.path().join("runs/linkonly/doc.document.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(doc.evals.len(), 2);
    assert!(doc.evals.iter().all(|e| e.dimension == Dimension::LinkWorks));
}

#[test]
fn invalid_dims_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let report = write_fixture_report(dir.path());
    run(&["parse", report.to_str().unwrap(), "--out", "doc.json"], dir.path());
    let out = run(&["evaluate", "--doc", "doc.json", "--dims", "bogus"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn evaluate_manifest_batch() {
    let dir = tempfile::tempdir().unwrap();
    let cache = write_cache(dir.path());
    let reports = dir.path().join("reports");
    std::fs::create_dir_all(&reports).unwrap();
    for i in 1..=3 {
        std::fs::write(
            reports.join(format!("q{i}.md")),
            "Alpha facts appear plainly here. [1]\n\n[1]: https://alpha.example/a\n",
        )
        .unwrap();
    }
    let manifest = dir.path().join("queries.json");
    let specs: Vec<serde_json::Value> = (1..=3)
        .map(|i| serde_json::json!({"query_id": format!("q{i}"), "query": format!("topic {i}")}))
        .collect();
    std::fs::write(&manifest, serde_json::to_string_pretty(&specs).unwrap()).unwrap();

    let out = run(
        &[
            "evaluate",
            "--manifest",
            manifest.to_str().unwrap(),
            "--reports-dir",
            reports.to_str().unwrap(),
            "--replay-cache",
            cache.to_str().unwrap(),
            "--out-dir",
            "runs",
            "--run-id",
            "batch",
            "--max-retries",
            "0",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");

    let run_dir = dir.path().join("runs/batch");
    for i in 1..=3 {
        assert!(run_dir.join(format!("q{i}.document.json")).exists());
    }
    assert!(run_dir.join("report.json").exists());
    let report = std::fs::read_to_string(run_dir.join("report.json")).unwrap();
    let metrics: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(metrics["n_queries"], 3);
    assert_eq!(metrics["n_success"], 3);
}

#[test]
fn judge_unreachable_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let report = write_fixture_report(dir.path());
    let cache = write_cache(dir.path());
    run(&["parse", report.to_str().unwrap(), "--out", "doc.json"], dir.path());

    let config = dir.path().join("config.json");
    std::fs::write(
        &config,
        serde_json::json!({
            "judge": {"backend": "remote", "endpoint": "http://127.0.0.1:1/chat", "model": "m"}
        })
        .to_string(),
    )
    .unwrap();

    let out = run(
        &[
            "evaluate",
            "--doc",
            "doc.json",
            "--config",
            config.to_str().unwrap(),
            "--replay-cache",
            cache.to_str().unwrap(),
            "--out-dir",
            "runs",
            "--run-id",
            "down",
            "--max-retries",
            "0",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn report_aggregates_and_sorts_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cache = write_cache(dir.path());

    // run-high: heuristic passes relevance; run-low: content disjoint, fails
    let low_cache_dir = dir.path().join("cache-low");
    let low_cache = ReplayCache::new(&low_cache_dir);
    low_cache
        .store_response("https://alpha.example/a", 200, Some("text/plain"), b"zzz qqq www")
        .unwrap();
    low_cache
        .store_response("https://beta.example/b", 404, Some("text/html"), b"")
        .unwrap();

    let report = write_fixture_report(dir.path());
    run(&["parse", report.to_str().unwrap(), "--out", "doc.json"], dir.path());
    for (run_id, cache_dir) in [("run-high", &cache), ("run-low", &low_cache_dir)] {
        let out = run(
            &[
                "evaluate",
                "--doc",
                "doc.json",
                "--replay-cache",
                cache_dir.to_str().unwrap(),
                "--out-dir",
                "runs",
                "--run-id",
                run_id,
                "--max-retries",
                "0",
            ],
            dir.path(),
        );
        assert!(out.status.success());
    }

    let md = run(&["report", "--runs", "runs", "--format", "markdown"], dir.path());
    assert!(md.status.success());
    let table = String::from_utf8_lossy(&md.stdout);
    let high_pos = table.find("run-high").expect("run-high row");
    let low_pos = table.find("run-low").expect("run-low row");
    assert!(high_pos < low_pos, "rows must sort descending by relevance:\n{table}");

    let csv = run(&["report", "--runs", "runs", "--format", "csv"], dir.path());
    assert!(csv.status.success());
    let text = String::from_utf8_lossy(&csv.stdout);
    let field_counts: Vec<usize> = text.lines().map(|l| l.split(',').count()).collect();
    assert!(field_counts.len() >= 3);
    assert!(field_counts.windows(2).all(|w| w[0] == w[1]));

    let unknown = run(&["report", "--runs", "runs", "--format", "xml"], dir.path());
    assert_eq!(unknown.status.code(), Some(2));

    let empty = dir.path().join("empty");
    std::fs::create_dir_all(&empty).unwrap();
    let none = run(
        &["report", "--runs", empty.to_str().unwrap(), "--format", "markdown"],
        dir.path(),
    );
    assert_eq!(none.status.code(), Some(2));
}

#[test]
fn ablate_default_budgets_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let report = write_fixture_report(dir.path());
    let cache = write_cache(dir.path());

    let script = dir.path().join("agent.sh");
    std::fs::write(&script, "cat \"$1\"\n").unwrap();
    let template = format!("sh {} {{query}} {{budget}}", script.display());

    let manifest = dir.path().join("queries.json");
    std::fs::write(
        &manifest,
        serde_json::json!([{"query_id": "q1", "query": report.to_str().unwrap()}]).to_string(),
    )
    .unwrap();

    let args = [
        "ablate",
        "--queries",
        manifest.to_str().unwrap(),
        "--agent-cmd",
        &template,
        "--replay-cache",
        cache.to_str().unwrap(),
        "--out-dir",
        "runs",
        "--run-id",
        "abl",
        "--max-retries",
        "0",
    ];
    let first = run(&args, dir.path());
    assert!(first.status.success(), "{first:?}");

    let csv_path = dir.path().join("runs/abl/ablation.csv");
    let csv1 = std::fs::read(&csv_path).unwrap();
    let budgets: Vec<u64> = String::from_utf8_lossy(&csv1)
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    let mut unique = budgets.clone();
    unique.dedup();
    assert_eq!(unique, vec![2, 10, 30, 50, 70, 100, 150]);

    // summary report carries per-budget rows
    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("runs/abl/report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(summary["budget_rows"].as_array().unwrap().len(), 7);

    let second = run(&args, dir.path());
    assert!(second.status.success());
    let csv2 = std::fs::read(&csv_path).unwrap();
    assert_eq!(csv1, csv2, "ablation.csv must be byte-identical across reruns");

    // single budget
    let single = run(
        &[
            "ablate",
            "--queries",
            manifest.to_str().unwrap(),
            "--agent-cmd",
            &template,
            "--budgets",
            "2",
            "--replay-cache",
            cache.to_str().unwrap(),
            "--out-dir",
            "runs",
            "--run-id",
            "single",
            "--max-retries",
            "0",
        ],
        dir.path(),
    );
    assert!(single.status.success());
    let csv = std::fs::read_to_string(dir.path().join("runs/single/ablation.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.starts_with("2,")));

    // malformed budgets
    let bad = run(
        &[
            "ablate",
            "--queries",
            manifest.to_str().unwrap(),
            "--agent-cmd",
            &template,
            "--budgets",
            "2,x",
        ],
        dir.path(),
    );
    assert_eq!(bad.status.code(), Some(2));

    // ablation requires the command-mode adapter
    let no_cmd = run(
        &["ablate", "--queries", manifest.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(no_cmd.status.code(), Some(2));
}

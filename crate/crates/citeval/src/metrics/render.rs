//! Report rendering: JSON (exact rationals), Markdown tables, CSV.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::types::Dimension;

use super::rate::{render_opt, Rate};
use super::{ablation_table, MetricsError, MetricsReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Markdown,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = MetricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "markdown" | "md" | "markdown_table" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(MetricsError::UnknownFormat(other.to_string())),
        }
    }
}

/// Renders one report. Markdown mirrors the headline table column order:
/// Success, Link Works, Relevant, Fact Check.
pub fn render_report(report: &MetricsReport, format: ReportFormat) -> Result<Vec<u8>, MetricsError> {
    render_comparison(std::slice::from_ref(report), format)
}

/// Renders several runs as one table. Rows are sorted descending by Relevant
/// Content rate; ties break on the run label.
pub fn render_comparison(
    reports: &[MetricsReport],
    format: ReportFormat,
) -> Result<Vec<u8>, MetricsError> {
    let mut ordered: Vec<&MetricsReport> = reports.iter().collect();
    ordered.sort_by(|a, b| {
        let ra = relevant_rate(a);
        let rb = relevant_rate(b);
        match (ra, rb) {
            (Some(x), Some(y)) => y.cmp_value(&x).then_with(|| a.label.cmp(&b.label)),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => a.label.cmp(&b.label),
        }
    });

    match format {
        ReportFormat::Json => {
            let rows: Vec<&MetricsReport> = ordered;
            let mut s = serde_json::to_string_pretty(&rows).expect("reports serialize");
            s.push('\n');
            Ok(s.into_bytes())
        }
        ReportFormat::Markdown => Ok(markdown_table(&ordered).into_bytes()),
        ReportFormat::Csv => csv_table(&ordered),
    }
}

fn relevant_rate(report: &MetricsReport) -> Option<Rate> {
    report
        .dimension(Dimension::RelevantContent)
        .and_then(|d| d.pass_rate)
}

fn dim_rate(report: &MetricsReport, dim: Dimension) -> String {
    render_opt(&report.dimension(dim).and_then(|d| d.pass_rate))
}

fn markdown_table(reports: &[&MetricsReport]) -> String {
    let mut out = String::new();
    out.push_str("| Run | Success | Link Works | Relevant | Fact Check | Pairs |\n");
    out.push_str("|---|---|---|---|---|---|\n");
    for r in reports {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} |\n",
            r.label,
            render_opt(&r.success_rate),
            dim_rate(r, Dimension::LinkWorks),
            dim_rate(r, Dimension::RelevantContent),
            dim_rate(r, Dimension::FactCheck),
            r.n_pairs,
        ));
    }
    out
}

fn csv_table(reports: &[&MetricsReport]) -> Result<Vec<u8>, MetricsError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([
            "run",
            "n_queries",
            "n_success",
            "success_rate",
            "n_pairs",
            "link_passed",
            "link_failed",
            "link_not_evaluated",
            "link_rate",
            "link_adjusted",
            "relevant_passed",
            "relevant_failed",
            "relevant_not_evaluated",
            "relevant_rate",
            "relevant_adjusted",
            "fact_passed",
            "fact_failed",
            "fact_not_evaluated",
            "fact_rate",
            "fact_adjusted",
        ])
        .expect("csv header");
    for r in reports {
        let mut record = vec![
            r.label.clone(),
            r.n_queries.to_string(),
            r.n_success.to_string(),
            render_opt(&r.success_rate),
            r.n_pairs.to_string(),
        ];
        for dim in Dimension::ALL {
            match r.dimension(dim) {
                Some(d) => {
                    record.push(d.passed.to_string());
                    record.push(d.failed.to_string());
                    record.push(d.not_evaluated.to_string());
                    record.push(render_opt(&d.pass_rate));
                    record.push(render_opt(&d.adjusted_pass_rate));
                }
                None => {
                    for _ in 0..5 {
                        record.push("n/a".to_string());
                    }
                }
            }
        }
        writer.write_record(&record).expect("csv row");
    }
    Ok(writer.into_inner().expect("csv buffer"))
}

/// Long-format ablation CSV: budget, dimension, passed, failed,
/// not_evaluated, rate. Budgets ascend.
pub fn render_ablation_csv(groups: &BTreeMap<u64, MetricsReport>) -> Vec<u8> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["budget", "dimension", "passed", "failed", "not_evaluated", "rate"])
        .expect("csv header");
    for (budget, report) in groups {
        for dim in Dimension::ALL {
            let Some(d) = report.dimension(dim) else {
                continue;
            };
            writer
                .write_record([
                    budget.to_string(),
                    dim.as_str().to_string(),
                    d.passed.to_string(),
                    d.failed.to_string(),
                    d.not_evaluated.to_string(),
                    render_opt(&d.pass_rate),
                ])
                .expect("csv row");
        }
    }
    writer.into_inner().expect("csv buffer")
}

/// Wide ablation table: one row per budget, pass rates per dimension.
pub fn render_ablation_markdown(groups: &BTreeMap<u64, MetricsReport>) -> String {
    let mut out = String::new();
    out.push_str("| Tool Calls | Link Works | Relevant | Fact Check |\n");
    out.push_str("|---|---|---|---|\n");
    for row in ablation_table(groups) {
        out.push_str(&format!(
            "| {} | {} | {} | {} |\n",
            row.budget,
            render_opt(&row.link_works),
            render_opt(&row.relevant_content),
            render_opt(&row.fact_check),
        ));
    }
    out
}

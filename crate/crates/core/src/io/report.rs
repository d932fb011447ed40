//! Benchmark reports as CSV or Markdown tables.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::bench::{ReportRow, SuiteReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    #[default]
    Csv,
    Markdown,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(format!("unknown report format {other:?} (expected csv or markdown)")),
        }
    }
}

pub const COLUMNS: [&str; 14] = [
    "instance", "mode", "capacity", "best_nv", "best_td", "mean_td", "std_td", "mean_cpu_s", "ref_nv", "ref_td",
    "marker", "seeds", "archive", "failed",
];

/// Two decimals, halves rounded away from zero.
pub fn fmt2(x: f64) -> String {
    format!("{:.2}", (x * 100.0).round() / 100.0)
}

fn cells(row: &ReportRow) -> Vec<String> {
    let stat = |f: fn(&crate::bench::CellStats) -> f64| row.stats.as_ref().map(|s| fmt2(f(s))).unwrap_or_default();
    vec![
        row.instance.clone(),
        row.mode.to_string(),
        format!("{}", row.capacity),
        row.stats.as_ref().map(|s| s.best_nv.to_string()).unwrap_or_default(),
        stat(|s| s.best_td),
        stat(|s| s.mean_td),
        stat(|s| s.std_td),
        stat(|s| s.mean_cpu_s),
        row.reference.map(|r| r.0.to_string()).unwrap_or_default(),
        row.reference.map(|r| fmt2(r.1)).unwrap_or_default(),
        row.marker.map(|m| m.symbol().to_string()).unwrap_or_default(),
        row.seeds.to_string(),
        row.archive_size.to_string(),
        row.failed.to_string(),
    ]
}

/// Rows as string cells in [`COLUMNS`] order.
pub fn report_cells(report: &SuiteReport) -> Vec<Vec<String>> {
    report.rows.iter().map(cells).collect()
}

pub fn write_report(report: &SuiteReport, format: ReportFormat, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(COLUMNS)?;
            for row in report_cells(report) {
                w.write_record(&row)?;
            }
            w.flush()
        }
        ReportFormat::Markdown => {
            let seeds: Vec<String> = report.seeds.iter().map(u64::to_string).collect();
            writeln!(out, "Seeds: {} ({})", report.seeds.len(), seeds.join(", "))?;
            writeln!(out, "Archive size L: {}", report.archive_size)?;
            writeln!(out)?;
            writeln!(out, "| {} |", COLUMNS.join(" | "))?;
            writeln!(out, "|{}", "---|".repeat(COLUMNS.len()))?;
            for row in report_cells(report) {
                let escaped: Vec<String> = row.iter().map(|c| c.replace('*', "\\*")).collect();
                writeln!(out, "| {} |", escaped.join(" | "))?;
            }
            Ok(())
        }
    }
}

//! Aggregation of results files into summaries and plot data.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use qgrain::uncertainty::Criterion;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::sweep::{ResultRow, ResultsHeader, RESULTS_FORMAT, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Plot,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "plot" => Ok(ReportFormat::Plot),
            other => Err(format!("unknown report format {other:?}")),
        }
    }
}

/// Aggregate over all runs sharing `(n, log2Q, criterion)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub n: u32,
    #[serde(rename = "log2Q")]
    pub log2_q: u32,
    pub criterion: Criterion,
    pub runs: u64,
    pub passes: u64,
    pub pass_rate: f64,
    pub mean_success_probability: f64,
}

/// Largest `n` at which every run passed, per grid and criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    #[serde(rename = "log2Q")]
    pub log2_q: u32,
    pub criterion: Criterion,
    pub n_star: Option<u32>,
    /// `log2` of the estimate `Q ≈ 2^{n_star}`, i.e. `n_star` itself.
    pub log2_q_estimate: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub rows: usize,
    pub cells: Vec<Cell>,
    pub thresholds: Vec<ThresholdRow>,
}

/// Parses a results file, checking the header and every row against the
/// current schema.
pub fn read_results(text: &str) -> Result<Vec<ResultRow>> {
    let mismatch = |line: usize, msg: String| HarnessError::SchemaMismatch(format!("line {line}: {msg}"));
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or_else(|| HarnessError::SchemaMismatch("missing header line".into()))?;
    let header: ResultsHeader = serde_json::from_str(first).map_err(|e| mismatch(1, e.to_string()))?;
    if header.schema_version != SCHEMA_VERSION || header.format != RESULTS_FORMAT {
        return Err(mismatch(
            1,
            format!("expected {RESULTS_FORMAT} v{SCHEMA_VERSION}, found {} v{}", header.format, header.schema_version),
        ));
    }
    lines
        .map(|(i, line)| {
            let row: ResultRow = serde_json::from_str(line).map_err(|e| mismatch(i + 1, e.to_string()))?;
            if row.schema_version != SCHEMA_VERSION {
                return Err(mismatch(i + 1, format!("row schema version {}", row.schema_version)));
            }
            if !row.final_success_probability.is_finite() || !row.norm_drift.is_finite() {
                return Err(mismatch(i + 1, "non-finite value".into()));
            }
            Ok(row)
        })
        .collect()
}

pub fn summarize(rows: &[ResultRow]) -> Report {
    let mut groups: BTreeMap<(u32, Criterion, u32), (u64, u64, f64)> = BTreeMap::new();
    for r in rows {
        let g = groups.entry((r.log2_q, r.criterion, r.n)).or_default();
        g.0 += 1;
        g.1 += u64::from(r.passed);
        g.2 += r.final_success_probability;
    }
    let mut cells: Vec<Cell> = groups
        .iter()
        .map(|(&(log2_q, criterion, n), &(runs, passes, total))| Cell {
            n,
            log2_q,
            criterion,
            runs,
            passes,
            pass_rate: passes as f64 / runs as f64,
            mean_success_probability: total / runs as f64,
        })
        .collect();

    let mut thresholds: BTreeMap<(u32, Criterion), Option<u32>> = BTreeMap::new();
    for c in &cells {
        let best = thresholds.entry((c.log2_q, c.criterion)).or_default();
        if c.passes == c.runs {
            *best = Some(best.map_or(c.n, |b| b.max(c.n)));
        }
    }
    let thresholds = thresholds
        .into_iter()
        .map(|((log2_q, criterion), n_star)| ThresholdRow { log2_q, criterion, n_star, log2_q_estimate: n_star })
        .collect();

    cells.sort_by_key(|c| (c.n, c.log2_q, c.criterion));
    Report { rows: rows.len(), cells, thresholds }
}

/// Renders a report. `plot` emits whitespace-delimited two-column blocks
/// separated by blank lines, each introduced by a `#` comment.
pub fn render_report(report: &Report, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| HarnessError::Serialize(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["n", "log2Q", "criterion", "runs", "passes", "pass_rate", "mean_success_probability"])
                .map_err(|e| HarnessError::Serialize(e.to_string()))?;
            for c in &report.cells {
                w.write_record([
                    c.n.to_string(),
                    c.log2_q.to_string(),
                    c.criterion.as_str().to_string(),
                    c.runs.to_string(),
                    c.passes.to_string(),
                    c.pass_rate.to_string(),
                    c.mean_success_probability.to_string(),
                ])
                .map_err(|e| HarnessError::Serialize(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| HarnessError::Serialize(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| HarnessError::Serialize(e.to_string()))
        }
        ReportFormat::Plot => {
            let mut out = String::new();
            let mut series: BTreeMap<(u32, Criterion), Vec<&Cell>> = BTreeMap::new();
            for c in &report.cells {
                series.entry((c.log2_q, c.criterion)).or_default().push(c);
            }
            for ((log2_q, criterion), cells) in &series {
                let _ = writeln!(out, "# success log2Q={log2_q} criterion={}", criterion.as_str());
                let _ = writeln!(out, "# n mean_success_probability");
                for c in cells {
                    let _ = writeln!(out, "{} {}", c.n, c.mean_success_probability);
                }
                out.push('\n');
            }
            let mut by_criterion: BTreeMap<Criterion, Vec<&ThresholdRow>> = BTreeMap::new();
            for t in &report.thresholds {
                by_criterion.entry(t.criterion).or_default().push(t);
            }
            for (criterion, rows) in &by_criterion {
                let _ = writeln!(out, "# threshold criterion={}", criterion.as_str());
                let _ = writeln!(out, "# log2Q n_star");
                for t in rows.iter().filter(|t| t.n_star.is_some()) {
                    let _ = writeln!(out, "{} {}", t.log2_q, t.n_star.unwrap_or_default());
                }
                out.push('\n');
            }
            Ok(out)
        }
    }
}

/// Parses, summarizes and renders a results file.
pub fn emit_report(text: &str, format: ReportFormat) -> Result<String> {
    render_report(&summarize(&read_results(text)?), format)
}

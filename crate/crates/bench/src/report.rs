//! Report files. `report.csv` holds one row per (class, seed, strategy) and
//! no wall-clock data, so identical runs give identical bytes; timings go to
//! a separate `timings.csv` keyed the same way.

use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use paperplan::planner::{PlanError, Strategy, StrategyReport};
use serde::{Deserialize, Serialize};

/// First line of every report file.
pub const REPORT_HEADER: &str = "# paperplan-report v1";
const TIMINGS_HEADER: &str = "# paperplan-timings v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Infeasible,
    Timeout,
    Failed,
}

impl RunStatus {
    pub fn of_error(err: &PlanError) -> RunStatus {
        if err.is_infeasible() {
            RunStatus::Infeasible
        } else if err.is_timeout() {
            RunStatus::Timeout
        } else {
            RunStatus::Failed
        }
    }

    /// Process exit code of a single solve.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunStatus::Ok => 0,
            RunStatus::Infeasible => 2,
            RunStatus::Timeout => 3,
            RunStatus::Failed => 4,
        }
    }
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::Ok => "ok",
            RunStatus::Infeasible => "infeasible",
            RunStatus::Timeout => "timeout",
            RunStatus::Failed => "failed",
        })
    }
}

/// One strategy run. Metric fields are empty for failed runs. Per-period
/// stock levels are `;`-separated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub class_id: Option<u32>,
    pub seed: u64,
    pub strategy: String,
    pub status: RunStatus,
    pub relaxed_cost: Option<f64>,
    pub rounded_cost: Option<f64>,
    pub gap: Option<f64>,
    pub cost1: Option<f64>,
    pub stock_cost1: Option<f64>,
    pub cost2: Option<f64>,
    pub stock_cost2: Option<f64>,
    pub cost3: Option<f64>,
    pub stock_cost3: Option<f64>,
    pub waste2_cm: Option<f64>,
    pub waste3_cm2: Option<f64>,
    pub stock_units1: String,
    pub stock_units2: String,
    pub stock_units3: String,
    pub capacity1: Option<f64>,
    pub capacity2: Option<f64>,
    pub capacity3: Option<f64>,
    pub columns_initial: Option<usize>,
    pub columns_generated: Option<usize>,
    pub columns_inserted: Option<usize>,
    pub columns_used_initial: Option<usize>,
    pub columns_used_generated: Option<usize>,
    pub iterations: Option<usize>,
    pub rounding_nodes: Option<usize>,
    pub truncated: Option<bool>,
    pub backtracked: Option<bool>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub class_id: Option<u32>,
    pub seed: u64,
    pub strategy: String,
    pub relax_seconds: Option<f64>,
    pub round_seconds: Option<f64>,
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(";")
}

/// Parses a `;`-separated stock column; empty input gives an empty list.
pub fn split_units(text: &str) -> Result<Vec<f64>, std::num::ParseFloatError> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(';').map(f64::from_str).collect()
}

impl ReportRow {
    pub fn from_report(class_id: Option<u32>, seed: u64, report: &StrategyReport<'_>) -> (ReportRow, TimingRow) {
        let p = &report.metrics.phases;
        let stats = report.stats();
        let rounded = report.components.iter().map(|c| &c.rounded);
        let row = ReportRow {
            class_id,
            seed,
            strategy: report.strategy.to_string(),
            status: RunStatus::Ok,
            relaxed_cost: Some(report.relaxed_cost),
            rounded_cost: Some(report.rounded_cost),
            gap: Some(report.rounding_gap()),
            cost1: Some(p[0].cost),
            stock_cost1: Some(p[0].stock_cost),
            cost2: Some(p[1].cost),
            stock_cost2: Some(p[1].stock_cost),
            cost3: Some(p[2].cost),
            stock_cost3: Some(p[2].stock_cost),
            waste2_cm: Some(p[1].waste),
            waste3_cm2: Some(p[2].waste),
            stock_units1: join(&p[0].stock_units),
            stock_units2: join(&p[1].stock_units),
            stock_units3: join(&p[2].stock_units),
            capacity1: Some(p[0].capacity_fraction),
            capacity2: Some(p[1].capacity_fraction),
            capacity3: Some(p[2].capacity_fraction),
            columns_initial: Some(stats.initial),
            columns_generated: Some(stats.generated),
            columns_inserted: Some(stats.inserted),
            columns_used_initial: Some(p.iter().map(|m| m.used_initial).sum()),
            columns_used_generated: Some(p.iter().map(|m| m.used_generated).sum()),
            iterations: Some(report.iterations()),
            rounding_nodes: Some(rounded.clone().map(|r| r.nodes).sum()),
            truncated: Some(rounded.clone().any(|r| r.truncated)),
            backtracked: Some(rounded.clone().any(|r| r.backtracked)),
            message: String::new(),
        };
        let timing = TimingRow {
            class_id,
            seed,
            strategy: row.strategy.clone(),
            relax_seconds: Some(report.relax_time.as_secs_f64()),
            round_seconds: Some(report.round_time.as_secs_f64()),
        };
        (row, timing)
    }

    pub fn failed(class_id: Option<u32>, seed: u64, strategy: Strategy, err: &PlanError) -> (ReportRow, TimingRow) {
        let row = ReportRow {
            class_id,
            seed,
            strategy: strategy.to_string(),
            status: RunStatus::of_error(err),
            relaxed_cost: None,
            rounded_cost: None,
            gap: None,
            cost1: None,
            stock_cost1: None,
            cost2: None,
            stock_cost2: None,
            cost3: None,
            stock_cost3: None,
            waste2_cm: None,
            waste3_cm2: None,
            stock_units1: String::new(),
            stock_units2: String::new(),
            stock_units3: String::new(),
            capacity1: None,
            capacity2: None,
            capacity3: None,
            columns_initial: None,
            columns_generated: None,
            columns_inserted: None,
            columns_used_initial: None,
            columns_used_generated: None,
            iterations: None,
            rounding_nodes: None,
            truncated: None,
            backtracked: None,
            message: err.to_string(),
        };
        let timing = TimingRow {
            class_id,
            seed,
            strategy: row.strategy.clone(),
            relax_seconds: None,
            round_seconds: None,
        };
        (row, timing)
    }

    pub fn is_ok(&self) -> bool {
        self.status == RunStatus::Ok
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: String, message: String },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ReportError + '_ {
    move |source| ReportError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn render<T: Serialize>(header: &str, rows: &[T]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let body = w.into_inner().map_err(|e| e.into_error())?;
    Ok(format!("{header}\n{}", String::from_utf8(body).expect("csv output is UTF-8")))
}

/// The exact text of a report file.
pub fn render_report(rows: &[ReportRow]) -> Result<String, csv::Error> {
    render(REPORT_HEADER, rows)
}

fn write_with_header<T: Serialize>(path: &Path, header: &str, rows: &[T]) -> Result<(), ReportError> {
    let text = render(header, rows).map_err(|e| ReportError::Format {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    fs::write(path, text).map_err(io_err(path))
}

pub fn write_report(path: &Path, rows: &[ReportRow]) -> Result<(), ReportError> {
    write_with_header(path, REPORT_HEADER, rows)
}

pub fn write_timings(path: &Path, rows: &[TimingRow]) -> Result<(), ReportError> {
    write_with_header(path, TIMINGS_HEADER, rows)
}

pub fn read_report(path: &Path) -> Result<Vec<ReportRow>, ReportError> {
    let format = |message: String| ReportError::Format {
        path: path.display().to_string(),
        message,
    };
    let file = fs::File::open(path).map_err(io_err(path))?;
    let mut reader = BufReader::new(file);
    let mut first = String::new();
    reader.read_line(&mut first).map_err(io_err(path))?;
    if first.trim_end() != REPORT_HEADER {
        return Err(format(format!("expected first line {REPORT_HEADER:?}, found {:?}", first.trim_end())));
    }
    let mut rows = Vec::new();
    for row in csv::Reader::from_reader(reader).deserialize() {
        rows.push(row.map_err(|e: csv::Error| format(e.to_string()))?);
    }
    Ok(rows)
}

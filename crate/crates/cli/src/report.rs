//! Run reports and their JSON / CSV / pretty renderings.
//!
//! JSON schema: `{command, parameters, results, checks[], seed?, tool_version}`
//! with check entries `{name, pass, observed, expected, tolerance}`.
//! CSV tables use a header row, commas, LF line endings and floats printed
//! with 17 significant digits, which round-trip any `f64`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
}

impl Check {
    /// Passes iff `|observed − expected| ≤ tolerance`.
    pub fn new(name: impl Into<String>, observed: f64, expected: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            pass: (observed - expected).abs() <= tolerance,
            observed,
            expected,
            tolerance,
        }
    }

    /// An error magnitude that must not exceed `tolerance`.
    pub fn bound(name: impl Into<String>, error: f64, tolerance: f64) -> Self {
        Self::new(name, error, 0.0, tolerance)
    }

    pub fn flag(name: impl Into<String>, observed: bool, expected: bool) -> Self {
        let f = |b: bool| if b { 1.0 } else { 0.0 };
        Self::new(name, f(observed), f(expected), 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub results: Value,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tool_version: String,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_owned(),
            parameters: BTreeMap::new(),
            results: Value::Null,
            checks: Vec::new(),
            seed: None,
            tool_version: TOOL_VERSION.to_owned(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_owned(), value.into());
        self
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// 0 when every check passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_owned())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

/// Formats a float with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn pretty(&self) -> String {
        match self {
            Cell::Float(x) if *x == 0.0 => "0".to_owned(),
            Cell::Float(x) if x.abs() < 1e-4 || x.abs() >= 1e6 => format!("{x:.6e}"),
            Cell::Float(x) => format!("{x:.9}"),
            other => other.csv(),
        }
    }
}

/// The tabular payload of a command, used for CSV and pretty output.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| (*s).to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// A finished command: the report plus its table view.
#[derive(Debug, Clone)]
pub struct Output {
    pub report: RunReport,
    pub table: Table,
    /// Non-fatal notes for stderr, such as axis normalization.
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

pub fn render(output: &Output, format: Format) -> Result<String, std::io::Error> {
    match format {
        Format::Json => render_json(&output.report),
        Format::Csv => render_csv(&output.table),
        Format::Pretty => Ok(render_pretty(output)),
    }
}

pub fn render_json(report: &RunReport) -> Result<String, std::io::Error> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

pub fn render_csv(table: &Table) -> Result<String, std::io::Error> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::csv))?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    String::from_utf8(bytes).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
}

pub fn render_pretty(output: &Output) -> String {
    let report = &output.report;
    let mut s = String::new();
    let _ = writeln!(s, "{} (werner {})", report.command, report.tool_version);
    for (k, v) in &report.parameters {
        let _ = writeln!(s, "  {k} = {v}");
    }
    if let Some(seed) = report.seed {
        let _ = writeln!(s, "  seed = {seed}");
    }

    let table = &output.table;
    if !table.rows.is_empty() {
        let cells: Vec<Vec<String>> = table.rows.iter().map(|r| r.iter().map(Cell::pretty).collect()).collect();
        let widths: Vec<usize> = (0..table.header.len())
            .map(|j| {
                cells
                    .iter()
                    .map(|r| r[j].len())
                    .chain([table.header[j].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        s.push('\n');
        let line = |cols: &[String]| {
            cols.iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        let _ = writeln!(s, "{}", line(&table.header));
        for row in &cells {
            let _ = writeln!(s, "{}", line(row));
        }
    }

    if !report.checks.is_empty() {
        s.push('\n');
        let failed = report.checks.iter().filter(|c| !c.pass).count();
        for c in &report.checks {
            let _ = writeln!(
                s,
                "  [{}] {}: observed {:.3e}, expected {:.3e}, tolerance {:.1e}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.observed,
                c.expected,
                c.tolerance
            );
        }
        let _ = writeln!(s, "\n{} checks, {} failed", report.checks.len(), failed);
    }
    s
}

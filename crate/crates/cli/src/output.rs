//! Machine-readable outputs.
//!
//! CSV cells carry 17 significant digits in scientific notation (lossless
//! f64 round trip), `.` decimal separator, `,` field separator, LF line
//! endings; identical runs produce byte-identical files. Every CSV gets a
//! JSON sidecar embedding the resolved configuration, the command with its
//! arguments, and per-row convergence flags, so a run is reproducible from
//! its sidecar alone. With `--format json` the data columns move into the
//! JSON document and no CSV is written.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::failure::Failure;

/// 17 significant digits, scientific; normalizes -0.0 to 0.0.
pub fn fmt17(v: f64) -> String {
    format!("{:.16e}", v + 0.0)
}

#[derive(Debug, Clone)]
pub enum ColumnData {
    Float(Vec<f64>),
    Int(Vec<u64>),
    Flag(Vec<bool>),
}

#[derive(Debug, Clone)]
pub struct Column {
    pub name: String,
    pub data: ColumnData,
}

impl Column {
    pub fn float(name: impl Into<String>, values: Vec<f64>) -> Self {
        Column {
            name: name.into(),
            data: ColumnData::Float(values),
        }
    }

    pub fn int(name: impl Into<String>, values: Vec<u64>) -> Self {
        Column {
            name: name.into(),
            data: ColumnData::Int(values),
        }
    }

    pub fn flag(name: impl Into<String>, values: Vec<bool>) -> Self {
        Column {
            name: name.into(),
            data: ColumnData::Flag(values),
        }
    }

    fn len(&self) -> usize {
        match &self.data {
            ColumnData::Float(v) => v.len(),
            ColumnData::Int(v) => v.len(),
            ColumnData::Flag(v) => v.len(),
        }
    }

    fn cell(&self, row: usize) -> String {
        match &self.data {
            ColumnData::Float(v) => fmt17(v[row]),
            ColumnData::Int(v) => v[row].to_string(),
            ColumnData::Flag(v) => if v[row] { "1" } else { "0" }.to_string(),
        }
    }

    fn json_values(&self) -> serde_json::Value {
        match &self.data {
            ColumnData::Float(v) => serde_json::json!(v),
            ColumnData::Int(v) => serde_json::json!(v),
            ColumnData::Flag(v) => serde_json::json!(v),
        }
    }
}

fn render_csv(columns: &[Column]) -> String {
    let rows = columns.first().map(Column::len).unwrap_or(0);
    debug_assert!(columns.iter().all(|c| c.len() == rows));
    let mut out = String::new();
    out.push_str(
        &columns
            .iter()
            .map(|c| c.name.as_str())
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push('\n');
    for row in 0..rows {
        let line = columns
            .iter()
            .map(|c| c.cell(row))
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(&line);
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct JsonColumn {
    name: String,
    values: serde_json::Value,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    command: &'a str,
    args: serde_json::Value,
    config: &'a RunConfig,
    columns: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    converged: Option<&'a [bool]>,
    all_converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    data: Option<Vec<JsonColumn>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub struct Emission<'a> {
    pub command: &'a str,
    pub args: serde_json::Value,
    pub config: &'a RunConfig,
    pub columns: Vec<Column>,
    /// Per-row convergence flags (None for outputs without mode sums).
    pub converged: Option<Vec<bool>>,
}

/// Write `<name>.csv` plus sidecar, or a single `<name>.json`, under `dir`.
/// Returns the paths written.
pub fn emit(dir: &Path, name: &str, format: Format, e: &Emission) -> Result<Vec<PathBuf>, Failure> {
    fs::create_dir_all(dir)?;
    let all_converged = e
        .converged
        .as_ref()
        .map(|flags| flags.iter().all(|&c| c))
        .unwrap_or(true);
    let mut sidecar = Sidecar {
        command: e.command,
        args: e.args.clone(),
        config: e.config,
        columns: e.columns.iter().map(|c| c.name.clone()).collect(),
        converged: e.converged.as_deref(),
        all_converged,
        data: None,
    };
    let mut written = Vec::new();
    match format {
        Format::Csv => {
            let csv_path = dir.join(format!("{name}.csv"));
            fs::write(&csv_path, render_csv(&e.columns))?;
            written.push(csv_path);
        }
        Format::Json => {
            sidecar.data = Some(
                e.columns
                    .iter()
                    .map(|c| JsonColumn {
                        name: c.name.clone(),
                        values: c.json_values(),
                    })
                    .collect(),
            );
        }
    }
    let json_path = dir.join(format!("{name}.json"));
    let mut text = serde_json::to_string_pretty(&sidecar)?;
    text.push('\n');
    fs::write(&json_path, text)?;
    written.push(json_path);
    Ok(written)
}

/// Write a standalone JSON report (used by the proportionality command).
pub fn emit_report<T: Serialize>(dir: &Path, name: &str, report: &T) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{name}.json"));
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}

//! Tabular results with CSV and JSON writers.

use crate::config::Format;
use crate::error::{CliError, CliResult, SCHEMA_VERSION};
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::io::Write;

/// One CSV field.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    /// 17 significant digits; non-finite values become `NaN`.
    pub fn render(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "NaN".into()
    }
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

impl From<i32> for Cell {
    fn from(x: i32) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// Result of one command: `# key = value` preamble, a table and the JSON payload.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub comments: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub payload: Map<String, Value>,
}

impl Report {
    pub fn new(command: &'static str, header: &[&str]) -> Self {
        Self {
            command,
            comments: Vec::new(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            payload: Map::new(),
        }
    }

    pub fn comment(&mut self, key: &str, value: impl Into<String>) {
        self.comments.push((key.into(), value.into()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn insert<T: Serialize>(&mut self, key: &str, value: &T) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.payload.insert(key.into(), v);
    }

    pub fn to_csv(&self) -> CliResult<Vec<u8>> {
        let mut out = Vec::new();
        for (k, v) in &self.comments {
            writeln!(out, "# {k} = {v}").map_err(|e| CliError::io("csv", e))?;
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.header).map_err(|e| CliError::io("csv", e))?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(|e| CliError::io("csv", e))?;
        }
        w.into_inner().map_err(|e| CliError::io("csv", e.error()))
    }

    /// `{"schema_version", "command", "columns", "rows", ...payload}`; rows keep the CSV values.
    pub fn to_json(&self) -> CliResult<Vec<u8>> {
        let mut doc = Map::new();
        doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
        doc.insert("command".into(), json!(self.command));
        doc.insert("columns".into(), json!(self.header));
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Array(
                    r.iter()
                        .map(|c| match c {
                            Cell::Float(x) if x.is_finite() => json!(x),
                            Cell::Float(_) => Value::Null,
                            Cell::Int(i) => json!(i),
                            Cell::Text(s) => json!(s),
                        })
                        .collect(),
                )
            })
            .collect();
        doc.insert("rows".into(), Value::Array(rows));
        for (k, v) in &self.payload {
            doc.insert(k.clone(), v.clone());
        }
        let mut out = serde_json::to_vec_pretty(&Value::Object(doc)).map_err(|e| CliError::io("json", e))?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn render(&self, format: Format) -> CliResult<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

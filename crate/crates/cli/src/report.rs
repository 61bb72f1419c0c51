//! Experiment reports: JSON is canonical, CSV flattens the row table.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use walkforge_core::{Result, WalkError};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `measured ≤ bound`.
    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound,
            pass: measured <= bound,
        }
    }

    /// Passes when `measured ≥ bound`.
    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound,
            pass: measured >= bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: Value,
    pub rows: Vec<Value>,
    pub checks: Vec<Check>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_seconds: Option<f64>,
}

impl ExperimentReport {
    pub fn new(command: &str, config: Value) -> Self {
        Self {
            tool: "walkforge".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config,
            rows: Vec::new(),
            checks: Vec::new(),
            passed: true,
            duration_seconds: None,
        }
    }

    pub fn row<T: Serialize>(&mut self, row: &T) {
        self.rows.push(serde_json::to_value(row).expect("rows serialize"));
    }

    pub fn check(&mut self, check: Check) {
        self.passed &= check.pass;
        self.checks.push(check);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per row; the header is the key set of the first row.
    /// Nested values are written as JSON text.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = csv::Writer::from_writer(Vec::new());
        let headers: Vec<String> = match self.rows.first() {
            Some(Value::Object(map)) => map.keys().cloned().collect(),
            Some(_) => vec!["value".into()],
            None => Vec::new(),
        };
        let csv_err = |e: csv::Error| WalkError::Io(e.to_string());
        if !headers.is_empty() {
            out.write_record(&headers).map_err(csv_err)?;
        }
        for row in &self.rows {
            let fields: Vec<String> = match row {
                Value::Object(map) => headers.iter().map(|h| cell(map, h)).collect(),
                other => vec![scalar(other)],
            };
            out.write_record(&fields).map_err(csv_err)?;
        }
        let bytes = out.into_inner().map_err(|e| WalkError::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<()> {
        let text = self.render(format)?;
        match out {
            Some(path) => std::fs::write(path, text)?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

fn cell(map: &Map<String, Value>, key: &str) -> String {
    map.get(key).map(scalar).unwrap_or_default()
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        other => other.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

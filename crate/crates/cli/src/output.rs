//! Tabular output: CSV with fixed scientific formatting, or a JSON mirror.

use std::fs;
use std::io::Write;
use std::path::Path;

use telsim_core::{Error, Result};

/// One cell of an output table.
#[derive(Debug, Clone)]
pub enum Value {
    Text(String),
    Num(f64),
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|v| match v {
                    Value::Text(s) => s.clone(),
                    Value::Num(x) => fmt_e12(*x),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (col, v) in self.columns.iter().zip(row) {
                    let jv = match v {
                        Value::Text(s) => serde_json::Value::String(s.clone()),
                        Value::Num(x) => serde_json::json!(x),
                    };
                    obj.insert(col.clone(), jv);
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }

    /// Render to stdout or a file.
    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<()> {
        let body = match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json())
                    .map_err(|e| Error::Internal(format!("json encoding: {e}")))?;
                s.push('\n');
                s
            }
        };
        match out {
            Some(path) => fs::write(path, body)
                .map_err(|e| Error::Contract(format!("cannot write {}: {e}", path.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(body.as_bytes())
                    .map_err(|e| Error::Internal(format!("stdout: {e}")))
            }
        }
    }
}

/// C-style `%.12e`: 12 fractional digits, sign and two-digit exponent.
pub fn fmt_e12(x: f64) -> String {
    let s = format!("{:.12e}", x);
    let (mantissa, exp) = s.split_once('e').expect("exponent marker");
    let (sign, digits) = match exp.strip_prefix('-') {
        Some(d) => ('-', d),
        None => ('+', exp),
    };
    format!("{mantissa}e{sign}{digits:0>2}")
}

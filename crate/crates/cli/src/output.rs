use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// What a command produced: a JSON document plus the rows used for CSV.
pub struct Report {
    pub document: Value,
    pub rows: Vec<Value>,
    pub passed: bool,
}

impl Report {
    pub fn new(document: impl Serialize, rows: Vec<Value>) -> Self {
        Report {
            document: to_value(document),
            rows,
            passed: true,
        }
    }
}

pub fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Family,
    IndependenceZ,
    IndependenceZ2,
    LocalKnotVanishing,
    TowerAudit,
}

/// Builds a certificate. The hash covers every field except `timestamp`
/// and `sha256` itself; keys are sorted because `Map` is a `BTreeMap`.
pub fn certificate(
    kind: Kind,
    inputs: Value,
    table: Vec<Value>,
    result: Value,
    passed: bool,
    seed: u64,
) -> Report {
    let mut body = Map::new();
    body.insert("kind".into(), to_value(kind));
    body.insert("inputs".into(), inputs);
    body.insert("table".into(), Value::Array(table.clone()));
    body.insert("result".into(), result);
    body.insert(
        "verdict".into(),
        json!(if passed { "PASS" } else { "FAIL" }),
    );
    body.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    body.insert("seed".into(), json!(seed));
    let canonical = serde_json::to_string(&Value::Object(body.clone())).expect("serializes");
    let digest = Sha256::digest(canonical.as_bytes());
    body.insert("sha256".into(), json!(format!("{digest:x}")));
    let now = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    body.insert("timestamp".into(), json!(now));
    Report {
        document: Value::Object(body),
        rows: table,
        passed,
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.document).expect("serializes");
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut header: Vec<String> = Vec::new();
            for row in &report.rows {
                if let Value::Object(m) = row {
                    for k in m.keys() {
                        if !header.contains(k) {
                            header.push(k.clone());
                        }
                    }
                }
            }
            header.sort();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&header)
                .map_err(|e| CliError::Io(e.into()))?;
            for row in &report.rows {
                let rec: Vec<String> = header
                    .iter()
                    .map(|k| row.get(k).map(cell).unwrap_or_default())
                    .collect();
                w.write_record(&rec).map_err(|e| CliError::Io(e.into()))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv of utf-8 strings"))
        }
    }
}

pub fn emit(report: &Report, format: Format, out: Option<&Path>) -> Result<()> {
    let text = render(report, format)?;
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

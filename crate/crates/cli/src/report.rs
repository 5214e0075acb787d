//! Report assembly. JSON is canonical; CSV is a flat projection of the
//! per-command record list.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::Format;
use crate::config::RunConfig;
use crate::error::CliError;

pub struct Outcome {
    pub results: Value,
    /// Flat records for the CSV projection; each is a JSON object of scalars.
    pub records: Vec<Value>,
    pub warnings: Vec<String>,
    /// Set when the report is complete but some of its parts failed.
    pub partial_failure: bool,
}

impl Outcome {
    pub fn new<R: Serialize, T: Serialize>(results: &R, records: &[T]) -> Result<Self, CliError> {
        Ok(Outcome {
            results: to_value(results)?,
            records: records.iter().map(to_value).collect::<Result<_, _>>()?,
            warnings: Vec::new(),
            partial_failure: false,
        })
    }
}

pub fn to_value<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Numeric(format!("cannot serialize report: {e}")))
}

pub fn render(config: &RunConfig, outcome: &Outcome) -> Result<Vec<u8>, CliError> {
    match config.format {
        Format::Json => {
            let doc = json!({
                "config": to_value(config)?,
                "results": outcome.results,
                "warnings": outcome.warnings,
            });
            let mut bytes = serde_json::to_vec_pretty(&doc)
                .map_err(|e| CliError::Numeric(format!("cannot serialize report: {e}")))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Csv => csv_bytes(&outcome.records),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_bytes(records: &[Value]) -> Result<Vec<u8>, CliError> {
    let fail = |e: csv::Error| CliError::Numeric(format!("cannot write csv: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    let empty = Map::new();
    let header: Vec<&String> = records
        .first()
        .and_then(Value::as_object)
        .unwrap_or(&empty)
        .keys()
        .collect();
    if header.is_empty() {
        return Ok(Vec::new());
    }
    w.write_record(&header).map_err(fail)?;
    for r in records {
        let row: Vec<String> = header.iter().map(|k| cell(r.get(k.as_str()).unwrap_or(&Value::Null))).collect();
        w.write_record(&row).map_err(fail)?;
    }
    w.into_inner()
        .map_err(|e| CliError::Numeric(format!("cannot write csv: {e}")))
}

pub fn emit(bytes: &[u8], out: Option<&Path>) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Numeric(format!("cannot write report: {e}"));
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(io),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).map_err(io)?;
            stdout.flush().map_err(io)
        }
    }
}

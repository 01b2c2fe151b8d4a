//! Rendering of command results as JSON, CSV or plain text.
//!
//! Every document has the same shape: the command, the resolved
//! configuration, the records, a status, and a separate `timing` key. Only
//! `timing` varies between runs with the same configuration.

use std::io::Write;
use std::str::FromStr;

use pentarec::{QuadNum, Rat};
use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::config::{Format, RunConfig};

pub type Record = Map<String, Value>;

/// A float as a JSON number with 17 significant digits; non-finite values
/// become null.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Number::from_str(&format!("{x:.16e}")).map(Value::Number).unwrap_or(Value::Null)
}

pub fn rat(x: &Rat) -> Value {
    Value::String(x.to_string())
}

pub fn quad(x: &QuadNum) -> Value {
    Value::String(x.to_string())
}

pub fn text(s: impl Into<String>) -> Value {
    Value::String(s.into())
}

pub fn rats<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> Value {
    Value::Array(xs.into_iter().map(rat).collect())
}

/// Builds a record from key/value pairs.
#[macro_export]
macro_rules! record {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut r = $crate::output::Record::new();
        $( r.insert($k.to_string(), serde_json::Value::from($v)); )*
        r
    }};
}

#[derive(Serialize)]
pub struct Document<'a> {
    pub command: &'a str,
    pub config: &'a RunConfig,
    pub status: &'a str,
    pub records: &'a [Record],
    pub timing: Timing,
}

#[derive(Serialize)]
pub struct Timing {
    pub seconds: Value,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub checks: Record,
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(xs) => xs.iter().map(scalar_text).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

fn columns(records: &[Record]) -> Vec<String> {
    let mut cols: Vec<String> = Vec::new();
    for r in records {
        for k in r.keys() {
            if !cols.contains(k) {
                cols.push(k.clone());
            }
        }
    }
    cols
}

pub fn render(doc: &Document<'_>, format: Format) -> Result<Vec<u8>, String> {
    let mut out = Vec::new();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, doc).map_err(|e| e.to_string())?;
            out.push(b'\n');
        }
        Format::Csv => {
            // Timing is left out so the table is reproducible byte for byte.
            let cols = columns(doc.records);
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&cols).map_err(|e| e.to_string())?;
            for r in doc.records {
                let row = cols.iter().map(|c| r.get(c).map(scalar_text).unwrap_or_default());
                w.write_record(row).map_err(|e| e.to_string())?;
            }
            w.flush().map_err(|e| e.to_string())?;
        }
        Format::Text => {
            let config = serde_json::to_value(doc.config).map_err(|e| e.to_string())?;
            writeln!(out, "command: {}", doc.command).map_err(|e| e.to_string())?;
            if let Value::Object(cfg) = config {
                for (k, v) in cfg {
                    writeln!(out, "config.{k}: {}", scalar_text(&v)).map_err(|e| e.to_string())?;
                }
            }
            writeln!(out, "status: {}", doc.status).map_err(|e| e.to_string())?;
            for r in doc.records {
                writeln!(out).map_err(|e| e.to_string())?;
                for (k, v) in r {
                    writeln!(out, "{k}: {}", scalar_text(v)).map_err(|e| e.to_string())?;
                }
            }
            writeln!(out, "\ntiming.seconds: {}", scalar_text(&doc.timing.seconds)).map_err(|e| e.to_string())?;
        }
    }
    Ok(out)
}

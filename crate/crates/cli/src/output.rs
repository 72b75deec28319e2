use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::Format;

/// One command's output: the echoed command and parameters, one or more
/// result rows, and timing.
#[derive(Serialize)]
pub struct Record {
    pub command: String,
    pub parameters: Value,
    pub results: Vec<Value>,
    pub version: &'static str,
    pub wall_time_secs: f64,
}

/// Rounds to 15 significant digits.
fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.14e}", x).parse().unwrap_or(x)
}

fn round_numbers(v: &mut Value) {
    match v {
        Value::Number(num) if num.is_f64() => {
            if let Some(r) = num.as_f64().map(round_sig).and_then(serde_json::Number::from_f64) {
                *num = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(_) | Value::Bool(_) => v.to_string(),
        _ => serde_json::to_string(v).expect("json value serializes"),
    }
}

pub fn emit(mut record: Record, format: Format, out: &mut impl Write) -> anyhow::Result<()> {
    record.parameters.as_object_mut().into_iter().for_each(|m| m.values_mut().for_each(round_numbers));
    record.results.iter_mut().for_each(round_numbers);
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &record)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let rows: Vec<Map<String, Value>> = record
                .results
                .into_iter()
                .map(|r| match r {
                    Value::Object(m) => m,
                    other => Map::from_iter([("value".to_string(), other)]),
                })
                .collect();
            let mut header: Vec<String> = Vec::new();
            for row in &rows {
                for key in row.keys() {
                    if !header.contains(key) {
                        header.push(key.clone());
                    }
                }
            }
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(&header)?;
            for row in &rows {
                w.write_record(header.iter().map(|k| row.get(k).map(cell).unwrap_or_default()))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

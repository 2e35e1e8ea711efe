//! Report rendering: numbers carry 12 significant digits.

use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Tabular part of a report, used for CSV output.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub body: Map<String, Value>,
    pub table: Option<Table>,
    /// Exit status when the report itself signals failure.
    pub status: i32,
}

impl Report {
    pub fn new() -> Self {
        Self { body: Map::new(), table: None, status: 0 }
    }

    pub fn with(mut self, key: &str, v: impl serde::Serialize) -> CliResult<Self> {
        self.body.insert(key.to_string(), to_value(v)?);
        Ok(self)
    }

    /// Merges the fields of a serializable struct into the body.
    pub fn merge(mut self, v: impl serde::Serialize) -> CliResult<Self> {
        match to_value(v)? {
            Value::Object(m) => self.body.extend(m),
            other => return Err(CliError::Output(format!("expected an object, got {other}"))),
        }
        Ok(self)
    }

    pub fn table(mut self, t: Table) -> Self {
        self.table = Some(t);
        self
    }
}

impl Default for Report {
    fn default() -> Self {
        Self::new()
    }
}

pub fn to_value(v: impl serde::Serialize) -> CliResult<Value> {
    serde_json::to_value(v).map_err(|e| CliError::Output(e.to_string()))
}

/// Rounds to [`SIGNIFICANT_DIGITS`]; `-0` becomes `0`.
pub fn round(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let r: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Finite floats rounded, infinities spelled out, everything else untouched.
pub fn number(x: f64) -> Value {
    if x.is_nan() {
        Value::Null
    } else if x.is_infinite() {
        Value::String(if x > 0.0 { "infinite" } else { "-infinite" }.into())
    } else {
        serde_json::Number::from_f64(round(x)).map_or(Value::Null, Value::Number)
    }
}

pub fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => number(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => Value::Array(a.into_iter().map(normalize).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

pub fn json(body: &Map<String, Value>) -> CliResult<String> {
    let v = normalize(Value::Object(body.clone()));
    serde_json::to_string_pretty(&v).map(|s| s + "\n").map_err(|e| CliError::Output(e.to_string()))
}

fn cell(v: &Value) -> String {
    match normalize(v.clone()) {
        Value::Null => String::new(),
        Value::String(s) => s,
        Value::Array(a) => a.iter().map(cell).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        other => out.push((prefix.to_string(), other.clone())),
    }
}

fn write_rows(headers: &[String], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    let err = |e: csv::Error| CliError::Output(e.to_string());
    w.write_record(headers).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

/// The table when present, otherwise the body flattened into one row.
pub fn csv(report: &Report) -> CliResult<String> {
    if let Some(t) = &report.table {
        let headers: Vec<String> = t.headers.iter().map(|h| h.to_string()).collect();
        let rows: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
        return write_rows(&headers, &rows);
    }
    let mut flat = vec![];
    flatten("", &Value::Object(report.body.clone()), &mut flat);
    let (headers, values): (Vec<String>, Vec<String>) = flat.iter().map(|(k, v)| (k.clone(), cell(v))).unzip();
    write_rows(&headers, &[values])
}

/// Rows of any serializable records, in header order.
pub fn records<T: serde::Serialize>(headers: Vec<&'static str>, items: &[T]) -> CliResult<Table> {
    let rows = items
        .iter()
        .map(|it| {
            let v = to_value(it)?;
            Ok(headers.iter().map(|h| v.get(*h).cloned().unwrap_or(Value::Null)).collect())
        })
        .collect::<CliResult<_>>()?;
    Ok(Table { headers, rows })
}

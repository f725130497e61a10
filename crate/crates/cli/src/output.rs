//! Bit-stable CSV and JSON result files.
//!
//! CSV: fixed column order, floats as `{:.16e}` (17 significant digits),
//! `\n` line endings. JSON: keys sorted, one document per command.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::error::CliError;
use crate::scenario::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(v) => format_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // non-finite values become null
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Named table with a fixed column order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: Vec<String>) -> Self {
        Table {
            name: name.to_string(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn with_columns(name: &str, columns: &[&str]) -> Self {
        Self::new(name, columns.iter().map(|c| c.to_string()).collect())
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width for table {}", self.name);
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Writes `tables` under `dir`: one `<table>.csv` per table, or a single
/// `<stem>.json` holding every table plus `meta`.
pub fn emit_results(dir: &Path, stem: &str, format: Format, meta: Value, tables: &[Table]) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let write = |path: PathBuf, text: String| -> Result<PathBuf, CliError> {
        fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Ok(path)
    };
    match format {
        Format::Csv => {
            let mut out = Vec::new();
            for t in tables {
                out.push(write(dir.join(format!("{}.csv", t.name)), t.to_csv()?)?);
            }
            out.push(write(dir.join(format!("{stem}_meta.json")), json_text(&meta))?);
            Ok(out)
        }
        Format::Json => {
            let mut doc = Map::new();
            for t in tables {
                doc.insert(t.name.clone(), t.to_json());
            }
            doc.insert("meta".into(), meta);
            Ok(vec![write(dir.join(format!("{stem}.json")), json_text(&Value::Object(doc)))?])
        }
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_has_17_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(-3.0), "-3.0000000000000000e0");
        let v = 0.1 + 0.2;
        assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::with_columns("x", &["t", "point_id"]);
        assert_eq!(t.to_csv().unwrap(), "t,point_id\n");
        assert_eq!(t.to_json(), Value::Array(vec![]));
    }

    #[test]
    fn json_keys_are_sorted() {
        let mut t = Table::with_columns("x", &["zeta", "alpha"]);
        t.push(vec![1.5.into(), "a,b".into()]);
        let text = serde_json::to_string(&t.to_json()).unwrap();
        assert_eq!(text, r#"[{"alpha":"a,b","zeta":1.5}]"#);
        assert_eq!(t.to_csv().unwrap(), "zeta,alpha\n1.5000000000000000e0,\"a,b\"\n");
    }

    #[test]
    fn writes_both_formats() {
        let dir = tempfile::tempdir().unwrap();
        let mut t = Table::with_columns("rows", &["v"]);
        t.push(vec![f64::NAN.into()]);
        let files = emit_results(dir.path(), "run", Format::Csv, Value::Null, &[t.clone()]).unwrap();
        assert_eq!(files.len(), 2);
        let files = emit_results(dir.path(), "run", Format::Json, serde_json::json!({"k": 1}), &[t]).unwrap();
        let doc: Value = serde_json::from_str(&fs::read_to_string(&files[0]).unwrap()).unwrap();
        assert_eq!(doc["rows"][0]["v"], Value::Null);
        assert_eq!(doc["meta"]["k"], 1);
    }
}

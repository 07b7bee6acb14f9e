//! Output of one run: a fixed-column table written as CSV or JSON, with the
//! effective configuration echoed into the file.

use std::collections::BTreeMap;
use std::io::Write;

use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::svg::Chart;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Str(String),
    Int(i64),
    Num(f64),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Str(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => x.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Str(s) => json!(s),
            Cell::Int(i) => json!(i),
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(x) => json!(x.to_string()),
            Cell::Bool(b) => json!(b),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Str(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Str(s)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

#[macro_export]
macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$($crate::report::Cell::from($x)),*] };
}

pub struct Report {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Human-readable lines printed to stderr and kept in the JSON output.
    pub notes: Vec<String>,
    /// Structured results for JSON output beyond the table.
    pub extra: Value,
    pub chart: Option<Chart>,
}

impl Report {
    pub fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Report {
            command,
            columns: columns.to_vec(),
            rows: Vec::new(),
            notes: Vec::new(),
            extra: Value::Null,
            chart: None,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width for {}", self.command);
        self.rows.push(row);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    /// CSV with a timestamp line and a config line, both `#` comments.
    pub fn to_csv(&self, config: &BTreeMap<String, String>, generated: &str) -> Result<Vec<u8>, CliError> {
        let mut out = Vec::new();
        writeln!(out, "# boolperc {} generated {generated}", self.command)?;
        let echo: Vec<String> = config.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(out, "# config: {}", echo.join(" "))?;
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(csv_err)?;
        }
        w.flush()?;
        drop(w);
        Ok(out)
    }

    pub fn to_json(&self, config: &BTreeMap<String, String>, generated: &str) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> =
                    self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect();
                Value::Object(obj)
            })
            .collect();
        json!({
            "command": self.command,
            "generated": generated,
            "config": config,
            "columns": self.columns,
            "rows": rows,
            "notes": self.notes,
            "results": self.extra,
        })
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut r = Report::new("demo", &["a", "b"]);
        r.push(row!["x,y", 0.5]);
        let cfg = BTreeMap::from([("seed".to_string(), "1".to_string())]);
        let text = String::from_utf8(r.to_csv(&cfg, "T").unwrap()).unwrap();
        assert_eq!(text, "# boolperc demo generated T\n# config: seed=1\na,b\n\"x,y\",0.5\n");
        let j = r.to_json(&cfg, "T");
        assert_eq!(j["rows"][0]["b"], json!(0.5));
    }
}

//! Tables and their CSV / JSON rendering.

use std::io::Write;

use serde_json::{json, Map, Value};
use thoma_core::rational::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    /// Exact value, written `p/q`.
    Rational(String),
    Text(String),
    Bool(bool),
}

impl Cell {
    pub fn rational(r: &Rational) -> Cell {
        Cell::Rational(format_rational(r))
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_f64(*x),
            Cell::Rational(s) | Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            // serde_json writes the shortest representation that round-trips
            Cell::Float(x) if x.is_finite() => json!(x),
            Cell::Float(x) => json!(format_f64(*x)),
            Cell::Rational(s) | Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
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

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// 17 significant digits.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// The result of one command.
#[derive(Clone, Debug)]
pub struct Output {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Invariant summary, written only with `--report`.
    pub report: Vec<(String, Cell)>,
    /// Validation outcome.
    pub passed: bool,
    /// A failed validation sets exit code 1 even without `--report`.
    pub always_checked: bool,
    /// A single record: JSON is written as one object instead of a row list.
    pub record: bool,
    pub default_format: Format,
}

impl Output {
    pub fn table(command: &'static str, columns: Vec<&'static str>) -> Self {
        Output {
            command,
            columns,
            rows: Vec::new(),
            report: Vec::new(),
            passed: true,
            always_checked: false,
            record: false,
            default_format: Format::Csv,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<Cell>) {
        self.report.push((key.into(), value.into()));
    }

    /// Records a named check in the report; a failure marks the run failed.
    pub fn check(&mut self, key: impl Into<String>, ok: bool) {
        self.passed &= ok;
        self.note(key, ok);
    }

    pub fn write(&self, out: &mut dyn Write, format: Option<Format>, report: bool) -> std::io::Result<()> {
        match format.unwrap_or(self.default_format) {
            Format::Csv => self.write_csv(out, report),
            Format::Json => self.write_json(out, report),
        }
    }

    fn write_csv(&self, out: &mut dyn Write, report: bool) -> std::io::Result<()> {
        {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(&self.columns)?;
            for row in &self.rows {
                w.write_record(row.iter().map(Cell::csv))?;
            }
            w.flush()?;
        }
        if report {
            for (k, v) in &self.report {
                writeln!(out, "# {k}: {}", v.csv())?;
            }
        }
        Ok(())
    }

    fn write_json(&self, out: &mut dyn Write, report: bool) -> std::io::Result<()> {
        let object = |row: &Vec<Cell>| -> Value {
            let m: Map<String, Value> = self.columns.iter().map(|c| c.to_string()).zip(row.iter().map(Cell::json)).collect();
            Value::Object(m)
        };
        let mut doc = if self.record && self.rows.len() == 1 {
            object(&self.rows[0])
        } else {
            let mut m = Map::new();
            m.insert("command".into(), json!(self.command));
            m.insert("rows".into(), Value::Array(self.rows.iter().map(object).collect()));
            Value::Object(m)
        };
        if report {
            let r: Map<String, Value> = self.report.iter().map(|(k, v)| (k.clone(), v.json())).collect();
            doc.as_object_mut().expect("object").insert("report".into(), Value::Object(r));
        }
        serde_json::to_writer_pretty(&mut *out, &doc)?;
        writeln!(out)
    }
}

//! Tables with one row per sample and a `pass` column, written as CSV
//! (RFC 4180 quoting) or JSON lines with the same column order.

use std::io::Write;

use anyhow::Result;
use serde_json::{Map, Value};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    Null,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            // non-finite floats have no JSON number form
            Cell::Float(v) if !v.is_finite() => Value::from(format_float(*v)),
            Cell::Float(v) => Value::from(*v),
            Cell::Bool(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Null => Value::Null,
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
        Cell::Int(v as i64)
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

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

/// Shortest round-trip form; scientific notation outside `[1e-5, 1e16)`.
pub fn format_float(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Clone, Debug)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    /// The last column must be `pass`.
    pub fn new(name: impl Into<String>, columns: Vec<&'static str>) -> Self {
        debug_assert_eq!(columns.last(), Some(&"pass"));
        Table {
            name: name.into(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width for table {}", self.name);
        self.rows.push(row);
    }

    pub fn failing_rows(&self) -> impl Iterator<Item = &Vec<Cell>> {
        self.rows.iter().filter(|r| r.last() == Some(&Cell::Bool(false)))
    }

    pub fn all_pass(&self) -> bool {
        self.failing_rows().next().is_none()
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_jsonl(&self, mut out: impl Write) -> Result<()> {
        for row in &self.rows {
            let obj: Map<String, Value> = self
                .columns
                .iter()
                .zip(row)
                .map(|(c, v)| (c.to_string(), v.json()))
                .collect();
            serde_json::to_writer(&mut out, &obj)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn csv_line(&self, row: &[Cell]) -> String {
        let mut buf = Vec::new();
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b' ')).from_writer(&mut buf);
        w.write_record(row.iter().map(Cell::csv)).expect("in-memory write");
        drop(w);
        String::from_utf8(buf).expect("utf-8").trim_end().to_string()
    }
}

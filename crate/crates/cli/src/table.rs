//! Column-oriented output as CSV or JSON.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::{Map, Value};

use crate::args::Format;
use crate::failure::Failure;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Flag(bool),
    Empty,
}

impl Cell {
    pub fn opt(x: Option<f64>) -> Cell {
        x.map_or(Cell::Empty, Cell::Num)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_f64(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Flag(b) => u8::from(*b).to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(n) => Value::from(*n),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Flag(b) => Value::from(*b),
            Cell::Empty => Value::Null,
        }
    }
}

/// 17 significant digits, enough for an exact binary64 round trip.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Table {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        w.flush()
    }

    /// One object per row; keys come out sorted.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    for (k, v) in self.columns.iter().zip(row) {
                        obj.insert((*k).to_string(), v.json());
                    }
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| Failure::io(path, e))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn io_failure(out: Option<&Path>, e: io::Error) -> Failure {
    Failure::io(out.unwrap_or(Path::new("<stdout>")), e)
}

pub fn emit_table(table: &Table, format: Format, out: Option<&Path>) -> Result<(), Failure> {
    match format {
        Format::Csv => {
            let w = sink(out)?;
            table.write_csv(w).map_err(|e| io_failure(out, e))
        }
        Format::Json => emit_json(&table.to_json(), out),
    }
}

pub fn emit_json(value: &Value, out: Option<&Path>) -> Result<(), Failure> {
    let mut w = sink(out)?;
    let text = serde_json::to_string_pretty(value).expect("serializable value");
    writeln!(w, "{text}").and_then(|_| w.flush()).map_err(|e| io_failure(out, e))
}

//! Row tables and their CSV / JSON serialization.

use std::io::{self, Write};

use serde_json::{Map, Value};

use crate::config::OutputFormat;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    pub fn opt_float(v: Option<f64>) -> Cell {
        v.map_or(Cell::Empty, Cell::Float)
    }

    /// 17 significant digits, scientific, lowercase `e`.
    fn csv_text(&self) -> String {
        match self {
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Float(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Set when a command emits more than one table.
    pub block: Option<&'static str>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(block: Option<&'static str>, columns: &[&'static str]) -> Self {
        Table {
            block,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }
}

/// CSV: one `# {config}` line, then per table an optional `# block: name`
/// line, the header and the rows.
pub fn write_csv<W: Write>(out: W, header_comment: &str, tables: &[Table]) -> io::Result<()> {
    let mut out = out;
    writeln!(out, "# {header_comment}")?;
    for table in tables {
        if let Some(block) = table.block {
            writeln!(out, "# block: {block}")?;
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(&mut out);
        w.write_record(&table.columns)?;
        for row in &table.rows {
            w.write_record(row.iter().map(Cell::csv_text))?;
        }
        w.flush()?;
    }
    Ok(())
}

/// JSON: one flat array of row objects; multi-table output tags rows with `block`.
pub fn write_json<W: Write>(mut out: W, tables: &[Table]) -> io::Result<()> {
    let rows: Vec<Value> = tables
        .iter()
        .flat_map(|t| {
            t.rows.iter().map(move |row| {
                let mut obj = Map::new();
                if let Some(block) = t.block {
                    obj.insert("block".into(), Value::String(block.into()));
                }
                for (name, cell) in t.columns.iter().zip(row) {
                    obj.insert((*name).into(), cell.json());
                }
                Value::Object(obj)
            })
        })
        .collect();
    serde_json::to_writer_pretty(&mut out, &rows)?;
    writeln!(out)
}

pub fn write_tables<W: Write>(out: W, format: OutputFormat, header_comment: &str, tables: &[Table]) -> io::Result<()> {
    match format {
        OutputFormat::Csv => write_csv(out, header_comment, tables),
        OutputFormat::Json => write_json(out, tables),
    }
}

//! Table rendering: aligned text, RFC-4180 CSV and JSON lines.
//!
//! Text output rounds to six significant digits; CSV and JSON lines carry
//! the shortest round-trip representation of each double, so re-parsing a
//! rendered CSV recovers the values exactly. Rendering the same table
//! twice produces identical bytes.

use std::io::Write;
use std::path::Path;

use crate::error::{EstError, Result};

/// Output format selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    JsonLines,
}

impl std::str::FromStr for Format {
    type Err = EstError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::JsonLines),
            other => Err(EstError::UnknownId(format!("format '{other}'"))),
        }
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Num(f64),
    Int(i64),
    Bool(bool),
    Empty,
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

/// A rectangular report, ready to render.
#[derive(Debug, Clone)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(title: &str, columns: &[&str]) -> Self {
        Table {
            title: title.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Format with (about) six significant digits for the text renderer.
fn sig6(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (5 - mag).clamp(0, 12) as usize;
    format!("{v:.decimals$}")
}

fn cell_text(cell: &Cell) -> String {
    match cell {
        Cell::Text(s) => s.clone(),
        Cell::Num(v) => sig6(*v),
        Cell::Int(v) => v.to_string(),
        Cell::Bool(b) => b.to_string(),
        Cell::Empty => String::new(),
    }
}

fn cell_full(cell: &Cell) -> String {
    match cell {
        Cell::Text(s) => s.clone(),
        // `{}` on f64 is the shortest representation that round-trips.
        Cell::Num(v) => format!("{v}"),
        Cell::Int(v) => v.to_string(),
        Cell::Bool(b) => b.to_string(),
        Cell::Empty => String::new(),
    }
}

/// Render to the chosen format.
pub fn render(table: &Table, format: Format, out: &mut dyn Write) -> Result<()> {
    let io_err = |e: std::io::Error| EstError::Io {
        path: "<writer>".into(),
        source: e,
    };
    match format {
        Format::Text => {
            let mut widths: Vec<usize> = table.columns.iter().map(|c| c.len()).collect();
            let rendered: Vec<Vec<String>> = table
                .rows
                .iter()
                .map(|row| row.iter().map(cell_text).collect())
                .collect();
            for row in &rendered {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.len());
                }
            }
            if !table.title.is_empty() {
                writeln!(out, "# {}", table.title).map_err(io_err)?;
            }
            let header: Vec<String> = table
                .columns
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            writeln!(out, "{}", header.join("  ")).map_err(io_err)?;
            for row in &rendered {
                let line: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect();
                writeln!(out, "{}", line.join("  ").trim_end()).map_err(io_err)?;
            }
        }
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(out);
            writer
                .write_record(&table.columns)
                .and_then(|_| {
                    for row in &table.rows {
                        let rec: Vec<String> = row.iter().map(cell_full).collect();
                        writer.write_record(&rec)?;
                    }
                    writer.flush().map_err(csv::Error::from)
                })
                .map_err(|e| EstError::Io {
                    path: "<writer>".into(),
                    source: std::io::Error::other(e.to_string()),
                })?;
        }
        Format::JsonLines => {
            for row in &table.rows {
                let mut obj = serde_json::Map::new();
                for (col, cell) in table.columns.iter().zip(row) {
                    let value = match cell {
                        Cell::Text(s) => serde_json::Value::from(s.as_str()),
                        Cell::Num(v) => serde_json::Value::from(*v),
                        Cell::Int(v) => serde_json::Value::from(*v),
                        Cell::Bool(b) => serde_json::Value::from(*b),
                        Cell::Empty => serde_json::Value::Null,
                    };
                    obj.insert(col.clone(), value);
                }
                writeln!(out, "{}", serde_json::Value::Object(obj)).map_err(io_err)?;
            }
        }
    }
    Ok(())
}

/// Render to a file path (or stdout when `path` is `None`).
pub fn render_to(table: &Table, format: Format, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let mut file = std::fs::File::create(p).map_err(|e| EstError::Io {
                path: p.display().to_string(),
                source: e,
            })?;
            render(table, format, &mut file)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            render(table, format, &mut lock)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_table() -> Table {
        let mut t = Table::new("demo", &["cell", "value"]);
        t.push(vec!["a".into(), Cell::Num(1.0 / 3.0)]);
        t.push(vec!["b".into(), Cell::Num(636.9158)]);
        t
    }

    #[test]
    fn empty_report_renders_header_only() {
        let t = Table::new("", &["a", "b"]);
        let mut buf = Vec::new();
        render(&t, Format::Text, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a  b\n");
    }

    #[test]
    fn one_row_text_is_stable() {
        let t = sample_table();
        let mut a = Vec::new();
        let mut b = Vec::new();
        render(&t, Format::Text, &mut a).unwrap();
        render(&t, Format::Text, &mut b).unwrap();
        assert_eq!(a, b);
        let s = String::from_utf8(a).unwrap();
        assert!(s.contains("0.333333"), "{s}");
        assert!(s.contains("636.916"), "{s}");
    }

    #[test]
    fn csv_round_trips_exactly() {
        let t = sample_table();
        let mut buf = Vec::new();
        render(&t, Format::Csv, &mut buf).unwrap();
        let mut reader = csv::Reader::from_reader(buf.as_slice());
        let values: Vec<f64> = reader
            .records()
            .map(|r| r.unwrap().get(1).unwrap().parse::<f64>().unwrap())
            .collect();
        assert_eq!(values[0].to_bits(), (1.0f64 / 3.0).to_bits());
        assert_eq!(values[1].to_bits(), 636.9158f64.to_bits());
    }

    #[test]
    fn jsonl_one_object_per_row() {
        let t = sample_table();
        let mut buf = Vec::new();
        render(&t, Format::JsonLines, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        let parsed: serde_json::Value = serde_json::from_str(lines[1]).unwrap();
        assert_eq!(
            parsed["value"].as_f64().unwrap().to_bits(),
            636.9158f64.to_bits()
        );
    }
}

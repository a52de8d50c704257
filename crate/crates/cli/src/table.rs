//! Tabular output: CSV with one header row, or a JSON array of objects with the same keys in
//! column order. Floats are written in shortest round-trip form so output is byte-stable.

use std::io::Write;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Bool(bool),
    Missing,
}

impl Cell {
    fn text(&self) -> String {
        match *self {
            Cell::Num(x) => format!("{x:?}"),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => "none".to_string(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            // serde_json writes non-finite numbers as null.
            Cell::Num(x) => s.serialize_f64(x),
            Cell::Bool(b) => s.serialize_bool(b),
            Cell::Missing => s.serialize_none(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Input(format!("unknown format {s:?}; expected csv or json"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

struct Row<'a> {
    columns: &'a [String],
    cells: &'a [Cell],
}

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.columns.len()))?;
        for (k, v) in self.columns.iter().zip(self.cells) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl Serialize for Table {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows.len()))?;
        for cells in &self.rows {
            seq.serialize_element(&Row {
                columns: &self.columns,
                cells,
            })?;
        }
        seq.end()
    }
}

/// Ordered key/value record: `key=value` lines as text, one object as JSON.
#[derive(Debug, Clone, Default)]
pub struct Record {
    pub entries: Vec<(String, Cell)>,
}

impl Record {
    pub fn push(&mut self, key: impl Into<String>, value: Cell) {
        self.entries.push((key.into(), value));
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Csv => {
                for (k, v) in &self.entries {
                    writeln!(out, "{k}={}", v.text()).map_err(CliError::output)?;
                }
            }
            Format::Json => {
                let (columns, cells): (Vec<String>, Vec<Cell>) = self.entries.iter().cloned().unzip();
                serde_json::to_writer_pretty(
                    &mut *out,
                    &Row {
                        columns: &columns,
                        cells: &cells,
                    },
                )
                .map_err(CliError::output)?;
                writeln!(out).map_err(CliError::output)?;
            }
        }
        out.flush().map_err(CliError::output)
    }
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_nums(&mut self, values: impl IntoIterator<Item = f64>) {
        self.rows.push(values.into_iter().map(Cell::Num).collect());
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns).map_err(CliError::output)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::text)).map_err(CliError::output)?;
                }
                w.flush().map_err(CliError::output)?;
            }
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self).map_err(CliError::output)?;
                writeln!(out).map_err(CliError::output)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_agree_on_names() {
        let mut t = Table::new(["t", "x"]);
        t.push_nums([0.1, 1e-20]);
        t.rows.push(vec![Cell::Num(2.0), Cell::Bool(true)]);
        let mut csv = Vec::new();
        t.write(Format::Csv, &mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "t,x\n0.1,1e-20\n2.0,true\n");
        let mut json = Vec::new();
        t.write(Format::Json, &mut json).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&json).unwrap();
        assert_eq!(v[0]["x"], 1e-20);
        assert_eq!(v[1]["x"], true);
        let text = String::from_utf8(json).unwrap();
        assert!(text.find("\"t\"").unwrap() < text.find("\"x\"").unwrap());
    }
}

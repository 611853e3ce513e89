//! Rendering of command reports as JSON, CSV or aligned text.

use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Result of one subcommand: a JSON payload, a flat row view for CSV and
/// table output, and whether every checked assertion held.
pub struct Report {
    pub command: &'static str,
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub ok: bool,
}

impl Report {
    pub fn new(command: &'static str, payload: impl Serialize) -> Report {
        Report {
            command,
            json: serde_json::to_value(payload).expect("report payloads serialize"),
            header: Vec::new(),
            rows: Vec::new(),
            ok: true,
        }
    }

    pub fn rows(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Report {
        self.header = header;
        self.rows = rows;
        self
    }

    pub fn ok(mut self, ok: bool) -> Report {
        self.ok = ok;
        self
    }

    /// The JSON document with `schema`, `command` and `ok` added.
    pub fn document(&self) -> Value {
        let mut doc = Map::new();
        doc.insert("schema".into(), SCHEMA_VERSION.into());
        doc.insert("command".into(), self.command.into());
        doc.insert("ok".into(), self.ok.into());
        match &self.json {
            Value::Object(fields) => {
                for (k, v) in fields {
                    doc.insert(k.clone(), v.clone());
                }
            }
            other => {
                doc.insert("result".into(), other.clone());
            }
        }
        Value::Object(doc)
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.document())?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()
            }
            Format::Table => write_table(&self.header, &self.rows, out),
        }
    }
}

fn write_table(header: &[&str], rows: &[Vec<String>], out: &mut impl Write) -> std::io::Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>, out: &mut dyn Write| -> std::io::Result<()> {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        writeln!(out, "{}", padded.join("  ").trim_end())
    };
    line(header.to_vec(), out)?;
    for row in rows {
        line(row.iter().map(String::as_str).collect(), out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn document_carries_schema_and_payload() {
        let r = Report::new("demo", serde_json::json!({ "q": 7 })).ok(false);
        let doc = r.document();
        assert_eq!(doc["schema"], 1);
        assert_eq!(doc["command"], "demo");
        assert_eq!(doc["ok"], false);
        assert_eq!(doc["q"], 7);
    }

    #[test]
    fn csv_and_table_rendering() {
        let r = Report::new("demo", ()).rows(
            vec!["a", "long_name"],
            vec![
                vec!["1".into(), "x,y".into()],
                vec!["22".into(), "z".into()],
            ],
        );
        let mut csv_out = Vec::new();
        r.write(Format::Csv, &mut csv_out).unwrap();
        assert_eq!(
            String::from_utf8(csv_out).unwrap(),
            "a,long_name\n1,\"x,y\"\n22,z\n"
        );

        let mut table = Vec::new();
        r.write(Format::Table, &mut table).unwrap();
        assert_eq!(
            String::from_utf8(table).unwrap(),
            "a   long_name\n1   x,y\n22  z\n"
        );
    }
}

//! Flat result tables with CSV and JSON renderings.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Version tag written into every rendered table.
pub const SCHEMA_VERSION: &str = "osctime-table/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(crate::Error::Parse(format!("unknown format {s:?}, expected csv or json"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match table {}", self.name);
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# schema={SCHEMA_VERSION} table={}", self.name);
        let _ = writeln!(out, "{}", self.columns.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::json!({
            "schema": SCHEMA_VERSION,
            "table": self.name,
            "columns": self.columns,
            "rows": self.rows,
        });
        serde_json::to_string_pretty(&v).expect("tables are plain strings") + "\n"
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Shortest round-trip rendering, so equal values always print identically.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:e}")
}

pub fn fmt_c64(v: Complex64) -> (String, String) {
    (fmt_f64(v.re), fmt_f64(v.im))
}

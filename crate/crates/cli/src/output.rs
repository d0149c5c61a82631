//! Result documents: a provenance block, a JSON result and an optional table for CSV.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
}

impl Provenance {
    pub fn new(command: &str) -> Self {
        Provenance {
            tool: "sewing",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            model: None,
            points: None,
            truncation: None,
            certificate: None,
        }
    }
}

/// Rows of exact strings; the last two columns of coefficient tables are `num, den`.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }
}

pub struct Document {
    pub provenance: Provenance,
    pub result: Value,
    pub table: Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Document {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let doc = serde_json::json!({ "provenance": self.provenance, "result": self.result });
                let mut s = serde_json::to_string_pretty(&doc).map_err(CliError::internal)?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let mut out = Vec::new();
                let prov = serde_json::to_string(&self.provenance).map_err(CliError::internal)?;
                writeln!(out, "# provenance: {prov}").map_err(CliError::internal)?;
                {
                    let mut w = csv::Writer::from_writer(&mut out);
                    w.write_record(&self.table.headers).map_err(CliError::internal)?;
                    for row in &self.table.rows {
                        w.write_record(row).map_err(CliError::internal)?;
                    }
                    w.flush().map_err(CliError::internal)?;
                }
                String::from_utf8(out).map_err(CliError::internal)
            }
        }
    }
}

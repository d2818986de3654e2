//! Output records: one JSON line per invocation, or CSV rows.

use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use num_bigint::BigInt;
use serde_json::{json, Value};

pub const SCHEMA: &str = "hypersplit.output/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Where the numbers came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Series,
    Enumeration,
    Recursion,
    Saddle,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Series => "series",
            Provenance::Enumeration => "enumeration",
            Provenance::Recursion => "recursion",
            Provenance::Saddle => "saddle",
        }
    }
}

pub struct OutputRecord {
    pub command: String,
    pub params: Value,
    pub results: Value,
    pub provenance: Vec<Provenance>,
    /// Rows written in CSV mode.
    pub rows: Vec<Vec<String>>,
}

impl OutputRecord {
    pub fn to_json(&self) -> Value {
        let provenance: Vec<&str> = self.provenance.iter().map(|p| p.as_str()).collect();
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "params": self.params,
            "results": self.results,
            "provenance": provenance.join("+"),
        })
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer(&mut *out, &self.to_json())?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .flexible(true)
                    .from_writer(&mut *out);
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

pub fn big_strings<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> Vec<String> {
    values.into_iter().map(BigInt::to_string).collect()
}

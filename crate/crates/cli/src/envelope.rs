//! The report envelope shared by every subcommand, and output rendering.
//!
//! JSON output is key-sorted and schema-stable; CSV output is the bare
//! payload table with a fixed column order (envelope metadata and warnings
//! go to stderr in CSV mode).

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Envelope around every command's payload.
#[derive(Debug, Serialize)]
pub struct ReportEnvelope {
    pub command: &'static str,
    /// Echo of the effective configuration.
    pub config: serde_json::Value,
    /// SHA-256 of the primary input (dataset file bytes, or the spec string).
    pub input_digest: String,
    pub payload: serde_json::Value,
    pub tool: &'static str,
    pub version: &'static str,
    pub warnings: Vec<String>,
}

impl ReportEnvelope {
    pub fn new(
        command: &'static str,
        config: serde_json::Value,
        input_digest: String,
        payload: serde_json::Value,
        warnings: Vec<String>,
    ) -> Self {
        ReportEnvelope {
            command,
            config,
            input_digest,
            payload,
            tool: "estbias",
            version: env!("CARGO_PKG_VERSION"),
            warnings,
        }
    }

    /// Key-sorted, pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("envelope serializes");
        let mut out = serde_json::to_string_pretty(&value).expect("value prints");
        out.push('\n');
        out
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

/// One payload table for CSV output.
#[derive(Debug)]
pub struct CsvTable {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn render(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(&self.header)
            .expect("header writes to memory");
        for row in &self.rows {
            writer.write_record(row).expect("row writes to memory");
        }
        String::from_utf8(writer.into_inner().expect("flushes to memory"))
            .expect("csv output is utf-8")
    }
}

/// Full-precision float cell; `{}` prints the shortest round-tripping form.
pub fn cell(value: f64) -> String {
    format!("{value}")
}

/// Optional float cell; absent values render as the empty string.
pub fn opt_cell(value: Option<f64>) -> String {
    value.map(cell).unwrap_or_default()
}

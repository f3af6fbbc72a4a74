//! Machine-readable result records.
//!
//! The `record` body is byte-reproducible from the echoed config and master
//! seed; wall-clock time lives outside it.

use hugeobject::codes::CodeDescriptor;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

#[derive(Serialize)]
pub struct ResultRecord<T: Serialize> {
    pub command: String,
    pub config: serde_json::Value,
    pub master_seed: u64,
    pub parallelism: usize,
    pub trials: Vec<T>,
    pub aggregate: serde_json::Value,
    pub library_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code_descriptor: Option<CodeDescriptor>,
}

#[derive(Serialize)]
pub struct Report<T: Serialize> {
    pub record: ResultRecord<T>,
    pub wall_clock_ms: u128,
}

impl<T: Serialize> Report<T> {
    pub fn emit(&self, out: Option<&Path>) -> anyhow::Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        match out {
            Some(path) => std::fs::write(path, json)?,
            None => println!("{json}"),
        }
        Ok(())
    }
}

/// Flat CSV export: one row per trial from caller-provided cells.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> anyhow::Result<()> {
    let mut file = std::fs::File::create(path)?;
    writeln!(file, "{}", header.join(","))?;
    for row in rows {
        writeln!(file, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn library_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

//! Versioned output documents: a commented header for CSV, an envelope for JSON.

use serde::Serialize;
use serde_json::{json, Value};
use std::io::Write;
use std::path::Path;

pub const SCHEMA: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `# key value` lines carrying the version, schema, command and resolved config.
pub fn csv_header<C: Serialize>(command: &str, config: &C) -> String {
    let cfg = serde_json::to_string(config).expect("config serializes");
    format!("# archipelago {VERSION}\n# schema {SCHEMA}\n# command {command}\n# config {cfg}\n")
}

pub fn json_document<C: Serialize>(command: &str, config: &C, data: Value) -> Vec<u8> {
    let doc = json!({
        "archipelago": VERSION,
        "schema": SCHEMA,
        "command": command,
        "config": config,
        "data": data,
    });
    let mut out = serde_json::to_vec_pretty(&doc).expect("document serializes");
    out.push(b'\n');
    out
}

/// Writes the whole buffer to `path`, or to stdout.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()
        }
    }
}

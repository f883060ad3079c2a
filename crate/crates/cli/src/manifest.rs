//! One record per invocation, appended as a JSON line.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::Cli;

#[derive(Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    /// SHA-256 of the `--in` file, hex.
    pub input_hash: Option<String>,
    pub seed: Option<u64>,
    pub config: Value,
    pub outputs: Vec<PathBuf>,
    pub wall_clock_ms: u128,
    pub verified: Option<bool>,
    pub exit_code: u8,
    pub error: Option<String>,
}

fn sha256_hex(path: &Path) -> Option<String> {
    let bytes = std::fs::read(path).ok()?;
    Some(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

impl RunManifest {
    pub fn new(
        cli: &Cli,
        command: &'static str,
        elapsed: Duration,
        verified: Option<bool>,
        exit_code: u8,
        error: Option<String>,
    ) -> RunManifest {
        RunManifest {
            command,
            input_hash: cli.input.as_deref().and_then(sha256_hex),
            seed: cli.seed,
            config: serde_json::to_value(&cli.command).unwrap_or(Value::Null),
            outputs: cli.out.iter().cloned().collect(),
            wall_clock_ms: elapsed.as_millis(),
            verified,
            exit_code,
            error,
        }
    }

    /// Appends to `explicit`, else to `<out>.manifest.jsonl`, else writes to
    /// stderr.
    pub fn emit(&self, explicit: Option<&Path>, out: Option<&Path>) -> std::io::Result<()> {
        let line = serde_json::to_string(self)?;
        let path = explicit.map(Path::to_path_buf).or_else(|| {
            out.map(|o| {
                let mut s = o.as_os_str().to_owned();
                s.push(".manifest.jsonl");
                PathBuf::from(s)
            })
        });
        match path {
            Some(p) => writeln!(OpenOptions::new().create(true).append(true).open(p)?, "{line}"),
            None => writeln!(std::io::stderr(), "{line}"),
        }
    }
}

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use crate::args::{Common, Format};
use crate::run::{Artifact, SCHEMA_VERSION};

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s: OsString = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

pub struct RunInfo<'a> {
    pub command: &'a str,
    pub inputs: Value,
    pub started: SystemTime,
    pub elapsed: Duration,
}

/// Data to `--out` (plus manifest) or stdout; summary lines to stderr.
pub fn emit(common: &Common, art: &Artifact, info: &RunInfo) -> std::io::Result<()> {
    let data = match common.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&art.json).expect("json");
            s.push('\n');
            s
        }
        Format::Csv => art.csv.clone(),
    };
    match &common.out {
        Some(path) => {
            std::fs::write(path, data.as_bytes())?;
            let m = manifest(common, art, info, path);
            let mut s = serde_json::to_string_pretty(&m).expect("json");
            s.push('\n');
            std::fs::write(manifest_path(path), s)?;
        }
        None => std::io::stdout().lock().write_all(data.as_bytes())?,
    }
    let mut err = std::io::stderr().lock();
    for line in &art.summary {
        writeln!(err, "{line}")?;
    }
    Ok(())
}

fn manifest(common: &Common, art: &Artifact, info: &RunInfo, path: &Path) -> Value {
    let started_ms = info.started.duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0);
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": info.command,
        "inputs": info.inputs,
        "format": match common.format { Format::Json => "json", Format::Csv => "csv" },
        "data_file": path.file_name().map(|f| f.to_string_lossy().into_owned()),
        "argv": std::env::args().skip(1).collect::<Vec<_>>(),
        "versions": {
            "sixvertex-cli": env!("CARGO_PKG_VERSION"),
            "sixvertex-core": sixvertex_core::VERSION,
        },
        "threads": rayon::current_num_threads(),
        "started_unix_ms": started_ms as u64,
        "elapsed_ms": info.elapsed.as_secs_f64() * 1e3,
        "status": if art.failure.is_some() { "check failed" } else { "ok" },
        "failure": art.failure,
    })
}

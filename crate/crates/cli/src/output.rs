//! Output plumbing: every file embeds the full run configuration, so
//! rerunning the embedded config reproduces the data. JSON is the
//! canonical machine format; CSV tables carry the config in a leading
//! comment line.

use std::fs;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

/// The resolved command line, replayed verbatim into every output.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dist: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub param: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    pub format: String,
}

impl RunConfig {
    pub fn new(command: &'static str, format: &str) -> Self {
        RunConfig {
            command,
            system: None,
            dist: None,
            param: None,
            reps: None,
            seed: None,
            bins: None,
            n_list: None,
            max_n: None,
            threads: None,
            format: format.to_string(),
        }
    }
}

/// JSON envelope: config, a wall-clock stamp (the only field allowed to
/// differ between identical reruns), and the report body.
pub fn json_envelope(config: &RunConfig, body: serde_json::Value) -> anyhow::Result<String> {
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let doc = serde_json::json!({
        "config": config,
        "generated_at_unix": stamp,
        "report": body,
    });
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

/// CSV tables carry the config as a `#` comment line, then the fixed
/// header and rows. No timestamp, so reruns are byte-identical.
pub fn csv_with_config(config: &RunConfig, table: &str) -> anyhow::Result<String> {
    Ok(format!("# config: {}\n{}", serde_json::to_string(config)?, table))
}

/// Writes to the path, or stdout when no path is given.
pub fn emit(out: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

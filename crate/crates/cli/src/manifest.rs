use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Record of one invocation: enough to re-run it and find everything it wrote.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub parameters: serde_json::Value,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub master_seed: Option<u64>,
    pub versions: BTreeMap<String, String>,
    pub started_at: String,
    pub finished_at: String,
}

fn stamp(t: DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Millis, true)
}

impl RunManifest {
    pub fn start(command: &str, parameters: serde_json::Value, master_seed: Option<u64>) -> Self {
        let versions = BTreeMap::from([
            ("agq-cli".to_string(), env!("CARGO_PKG_VERSION").to_string()),
            ("agq-core".to_string(), agq_core::VERSION.to_string()),
        ]);
        let now = stamp(Utc::now());
        RunManifest {
            command: command.into(),
            argv: std::env::args().collect(),
            parameters,
            inputs: Vec::new(),
            outputs: Vec::new(),
            master_seed,
            versions,
            started_at: now.clone(),
            finished_at: now,
        }
    }

    /// Stamps the finish time and writes the manifest into `dir`; the manifest
    /// lists itself among the outputs.
    pub fn finish(mut self, dir: &Path) -> anyhow::Result<PathBuf> {
        let path = dir.join(MANIFEST_FILE);
        self.outputs.push(path.clone());
        self.finished_at = stamp(Utc::now());
        std::fs::write(&path, serde_json::to_string_pretty(&self)? + "\n")?;
        Ok(path)
    }
}

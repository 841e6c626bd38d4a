use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::Context;
use serde::{Deserialize, Serialize};
use topicatlas::corpus::IngestOptions;
use topicatlas::inference::TrainConfig;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Everything needed to re-run a command: its arguments, the resolved
/// configuration, input/output paths and content hashes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub version: String,
    pub config: Option<TrainConfig>,
    pub ingest: Option<IngestOptions>,
    /// Command-specific settings not covered by `config`.
    pub settings: BTreeMap<String, serde_json::Value>,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
    pub corpus_hash: Option<String>,
    pub model_hash: Option<String>,
    pub seed: Option<u64>,
    pub threads: usize,
    pub started_unix: u64,
    pub elapsed_secs: f64,
}

pub struct ManifestBuilder {
    manifest: RunManifest,
    start: Instant,
}

impl ManifestBuilder {
    pub fn new(command: &str, threads: usize) -> Self {
        let started_unix = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Self {
            manifest: RunManifest {
                command: command.into(),
                args: std::env::args().collect(),
                version: env!("CARGO_PKG_VERSION").into(),
                config: None,
                ingest: None,
                settings: BTreeMap::new(),
                inputs: BTreeMap::new(),
                outputs: BTreeMap::new(),
                corpus_hash: None,
                model_hash: None,
                seed: None,
                threads,
                started_unix,
                elapsed_secs: 0.0,
            },
            start: Instant::now(),
        }
    }

    pub fn m(&mut self) -> &mut RunManifest {
        &mut self.manifest
    }

    pub fn input(&mut self, name: &str, path: &Path) {
        self.manifest.inputs.insert(name.into(), path.display().to_string());
    }

    pub fn output(&mut self, name: &str, path: &Path) {
        self.manifest.outputs.insert(name.into(), path.display().to_string());
    }

    pub fn setting(&mut self, name: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("setting serializes");
        self.manifest.settings.insert(name.into(), v);
    }

    /// Writes `manifest.json` into `dir`.
    pub fn finish(mut self, dir: &Path) -> anyhow::Result<RunManifest> {
        self.manifest.elapsed_secs = self.start.elapsed().as_secs_f64();
        let path = dir.join(MANIFEST_FILE);
        let mut bytes = serde_json::to_vec_pretty(&self.manifest)?;
        bytes.push(b'\n');
        std::fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        Ok(self.manifest)
    }
}

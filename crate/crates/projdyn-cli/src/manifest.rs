//! Run manifests: every command records its inputs, parameters, seeds and
//! produced files, keyed by a content hash of the map file so fixtures
//! cannot drift silently.

use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub map_file_hash: String,
    pub seeds: Vec<u64>,
    pub parameters: BTreeMap<String, String>,
    pub outputs: Vec<PathBuf>,
    pub tool_version: String,
    pub wall_time_seconds: f64,
}

/// FNV-1a 64-bit content hash, hex-encoded.
pub fn fnv1a_hex(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x1000_0000_01b3);
    }
    format!("{h:016x}")
}

pub struct ManifestBuilder {
    manifest: RunManifest,
    start: std::time::Instant,
}

impl ManifestBuilder {
    pub fn new(command: &str) -> Self {
        ManifestBuilder {
            manifest: RunManifest {
                command: command.to_string(),
                map_file_hash: String::new(),
                seeds: vec![],
                parameters: BTreeMap::new(),
                outputs: vec![],
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                wall_time_seconds: 0.0,
            },
            start: std::time::Instant::now(),
        }
    }

    pub fn map_bytes(&mut self, bytes: &[u8]) -> &mut Self {
        self.manifest.map_file_hash = fnv1a_hex(bytes);
        self
    }

    pub fn seed(&mut self, seed: u64) -> &mut Self {
        self.manifest.seeds.push(seed);
        self
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.manifest
            .parameters
            .insert(key.to_string(), value.to_string());
        self
    }

    pub fn output(&mut self, path: &Path) -> &mut Self {
        self.manifest.outputs.push(path.to_path_buf());
        self
    }

    pub fn write(mut self, dir: &Path) -> std::io::Result<()> {
        self.manifest.wall_time_seconds = self.start.elapsed().as_secs_f64();
        let path = dir.join("manifest.json");
        std::fs::write(&path, serde_json::to_string_pretty(&self.manifest)?)
    }
}

//! Run manifest: configuration hash, seed, crate version, and per-stage
//! input/output digests. Identical config and inputs produce identical
//! digests, which makes any two runs comparable.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageRecord {
    pub name: String,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub seed: u64,
    pub config_sha256: String,
    pub stages: Vec<StageRecord>,
}

impl RunManifest {
    pub fn new(seed: u64, config_bytes: &[u8]) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            config_sha256: sha256_hex(config_bytes),
            stages: Vec::new(),
        }
    }

    pub fn record_stage(
        &mut self,
        name: &str,
        inputs: &[&Path],
        outputs: &[&Path],
    ) -> Result<(), CliError> {
        let digest_map = |paths: &[&Path]| -> Result<BTreeMap<String, String>, CliError> {
            paths
                .iter()
                .filter(|p| p.exists())
                .map(|p| Ok((p.display().to_string(), digest_path(p)?)))
                .collect()
        };
        self.stages.push(StageRecord {
            name: name.to_string(),
            inputs: digest_map(inputs)?,
            outputs: digest_map(outputs)?,
        });
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let body = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::data(format!("manifest serialization: {e}")))?;
        std::fs::write(path, body)
            .map_err(|e| CliError::data(format!("manifest {}: {e}", path.display())))?;
        Ok(())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("{:x}", hasher.finalize())
}

/// Digest of a file, or of the sorted (name, digest) list for a directory.
pub fn digest_path(path: &Path) -> Result<String, CliError> {
    let io_err = |e: std::io::Error| CliError::data(format!("digest {}: {e}", path.display()));
    if path.is_dir() {
        let mut entries: Vec<(String, String)> = Vec::new();
        let mut names: Vec<_> = std::fs::read_dir(path)
            .map_err(io_err)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        names.sort();
        for file in names {
            let bytes = std::fs::read(&file).map_err(io_err)?;
            entries.push((
                file.file_name().unwrap_or_default().to_string_lossy().into_owned(),
                sha256_hex(&bytes),
            ));
        }
        let listing = entries
            .iter()
            .map(|(n, d)| format!("{n}:{d}"))
            .collect::<Vec<_>>()
            .join("\n");
        Ok(sha256_hex(listing.as_bytes()))
    } else {
        let bytes = std::fs::read(path).map_err(io_err)?;
        Ok(sha256_hex(&bytes))
    }
}

//! Run manifests: a JSON sidecar (`<out>.manifest.json`) pinning what
//! produced each output file. Identical inputs and flags give identical
//! manifests up to the wall-clock field.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Serialize)]
struct RunManifest {
    subcommand: String,
    flags: BTreeMap<String, String>,
    bank_checksum: Option<String>,
    input_checksums: BTreeMap<String, String>,
    tool_version: String,
    wall_clock_ms: u128,
}

pub struct ManifestBuilder {
    subcommand: String,
    flags: BTreeMap<String, String>,
    bank_checksum: Option<String>,
    input_checksums: BTreeMap<String, String>,
    deferred_bank_output: Option<std::path::PathBuf>,
}

fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let digest = hasher.finalize();
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    Ok(format!("sha256:{hex}"))
}

impl ManifestBuilder {
    pub fn new(subcommand: &str, flags: BTreeMap<String, String>) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            flags,
            bank_checksum: None,
            input_checksums: BTreeMap::new(),
            deferred_bank_output: None,
        }
    }

    /// Checksums an input file.
    pub fn input(mut self, path: &Path) -> Result<Self, CliError> {
        self.input_checksums
            .insert(path.display().to_string(), sha256_file(path)?);
        Ok(self)
    }

    /// Checksums a consumed bank file (recorded both as the bank checksum and
    /// an ordinary input).
    pub fn bank_input(mut self, path: &Path) -> Result<Self, CliError> {
        let checksum = sha256_file(path)?;
        self.bank_checksum = Some(checksum.clone());
        self.input_checksums
            .insert(path.display().to_string(), checksum);
        Ok(self)
    }

    /// For `sample`: the bank checksum is the just-written output file,
    /// hashed at write time.
    pub fn bank_output(mut self, path: &Path) -> Self {
        self.deferred_bank_output = Some(path.to_path_buf());
        self
    }

    pub fn write(mut self, out: &Path, started: Instant) -> Result<(), CliError> {
        if let Some(path) = self.deferred_bank_output.take() {
            self.bank_checksum = Some(sha256_file(&path)?);
        }
        let manifest = RunManifest {
            subcommand: self.subcommand,
            flags: self.flags,
            bank_checksum: self.bank_checksum,
            input_checksums: self.input_checksums,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_clock_ms: started.elapsed().as_millis(),
        };
        let mut json = serde_json::to_string_pretty(&manifest)
            .map_err(|e| CliError::Internal(format!("manifest serialization: {e}")))?;
        json.push('\n');
        let path = manifest_path(out);
        fs::write(&path, json)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
    }
}

pub fn manifest_path(out: &Path) -> std::path::PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::output::{sha256_hex, write_atomic};

pub const MANIFEST_SCHEMA: &str = "spectral-gates.manifest";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl FileDigest {
    pub fn of_bytes(path: &Path, bytes: &[u8]) -> Self {
        Self {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        }
    }

    pub fn of_file(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        Ok(Self::of_bytes(path, &bytes))
    }
}

/// Everything needed to rerun a command and check that it reproduced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: String,
    pub version: u32,
    pub command: String,
    pub artifact_version: String,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
    pub wall_time_s: f64,
    /// Resolved settings: the full config for `synthesize`, the flags
    /// otherwise.
    pub config: toml::Table,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

pub fn unix_ms(t: SystemTime) -> u64 {
    t.duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_millis() as u64)
}

/// `run.csv` → `run.manifest.toml`.
pub fn manifest_path(out: &Path) -> PathBuf {
    out.with_extension("manifest.toml")
}

impl RunManifest {
    pub fn new(command: &str, started: SystemTime) -> Self {
        Self {
            schema: MANIFEST_SCHEMA.into(),
            version: crate::formats::FORMAT_VERSION,
            command: command.into(),
            artifact_version: env!("CARGO_PKG_VERSION").into(),
            exit_code: 0,
            seed: None,
            threads: None,
            started_unix_ms: unix_ms(started),
            finished_unix_ms: unix_ms(started),
            wall_time_s: 0.0,
            config: toml::Table::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn set_config<T: Serialize>(&mut self, config: &T) -> Result<()> {
        self.config = toml::Table::try_from(config)
            .map_err(|e| CliError::Usage(format!("recording config: {e}")))?;
        Ok(())
    }

    /// Stamps the finish time and writes the manifest beside `out`.
    pub fn finish(mut self, started: SystemTime, out: &Path) -> Result<PathBuf> {
        let now = SystemTime::now();
        self.finished_unix_ms = unix_ms(now);
        self.wall_time_s = now.duration_since(started).map_or(0.0, |d| d.as_secs_f64());
        let text = toml::to_string(&self)
            .map_err(|e| CliError::Usage(format!("serializing manifest: {e}")))?;
        let path = manifest_path(out);
        write_atomic(&path, text.as_bytes())?;
        Ok(path)
    }
}

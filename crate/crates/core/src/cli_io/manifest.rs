use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{CommandKind, RunConfig};
use super::output::write_file;
use crate::error::{Result, SenseError};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Everything needed to reproduce a run's output files.
///
/// Passing the manifest back through `--config` re-resolves the same
/// `RunConfig`, so the CSV and JSON outputs come out byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: CommandKind,
    pub config: RunConfig,
    pub master_seed: u64,
    /// Seed of the H0 calibration runs, when thresholds were calibrated.
    #[serde(default)]
    pub calibration_seed: Option<u64>,
    /// Worker threads used; does not affect results.
    #[serde(default)]
    pub workers: Option<usize>,
    pub duration_seconds: f64,
    pub outputs: Vec<PathBuf>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl RunManifest {
    pub fn new(command: CommandKind, config: RunConfig) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            master_seed: config.seed,
            config,
            calibration_seed: None,
            workers: None,
            duration_seconds: 0.0,
            outputs: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(MANIFEST_FILE);
        let mut text = serde_json::to_string_pretty(self).map_err(|e| SenseError::Parse {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        text.push('\n');
        write_file(&path, &text)?;
        Ok(path)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| SenseError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| SenseError::Parse {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }
}

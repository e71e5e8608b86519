//! Run manifests and the on-disk run directory layout:
//! `runs/<run_id>/<query_id>.document.json` plus `runs/<run_id>/manifest.json`.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::config::{QuerySpec, RunConfig, RunRecord};

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read manifest {path}: {source}")]
    Io {
        path: String,
        source: io::Error,
    },
    #[error("manifest {path} is not a JSON list of query specs: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
}

/// Loads a batch manifest: a UTF-8 JSON array of query specs.
pub fn load_manifest(path: &Path) -> Result<Vec<QuerySpec>, ManifestError> {
    let text = fs::read_to_string(path).map_err(|source| ManifestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| ManifestError::Parse {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub run_id: String,
    /// Wall-clock stamp; absent in deterministic (replay) runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<String>,
    pub config: RunConfig,
    pub queries: Vec<RunManifestEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifestEntry {
    pub query_id: String,
    pub query: String,
    pub origin: String,
    pub success: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generation_error: Option<String>,
}

/// Writes one run's documents and manifest; returns the run directory.
pub fn write_run_dir(
    base: &Path,
    run_id: &str,
    config: &RunConfig,
    records: &[RunRecord],
    generated_at: Option<String>,
) -> io::Result<PathBuf> {
    let dir = base.join(run_id);
    fs::create_dir_all(&dir)?;

    for record in records {
        let path = dir.join(format!("{}.document.json", record.query_id));
        let json = record
            .document
            .to_json()
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
        fs::write(path, json)?;
    }

    let manifest = RunManifest {
        run_id: run_id.to_string(),
        generated_at,
        config: config.clone(),
        queries: records
            .iter()
            .map(|r| RunManifestEntry {
                query_id: r.query_id.clone(),
                query: r.query.clone(),
                origin: r.origin.clone(),
                success: r.success,
                generation_error: r.generation_error.clone(),
            })
            .collect(),
    };
    let mut json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    json.push('\n');
    fs::write(dir.join("manifest.json"), json)?;
    Ok(dir)
}

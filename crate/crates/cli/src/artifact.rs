//! Run artifacts and their atomic persistence.

use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const OUT_DIR_ENV: &str = "OPA_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "runs";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunArtifact {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub diagnostics: Value,
    pub created_at: String,
    pub schema_version: u32,
}

impl RunArtifact {
    pub fn new(command: &str, inputs: Value, outputs: Value, diagnostics: Value, now: DateTime<Utc>) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            outputs,
            diagnostics,
            created_at: now.to_rfc3339_opts(SecondsFormat::Millis, true),
            schema_version: SCHEMA_VERSION,
        }
    }
}

/// Where the artifact goes: `out` as a file, or inside `out` when it is a
/// directory, otherwise under `$OPA_OUT_DIR` or `./runs`.
pub fn artifact_path(out: Option<&Path>, command: &str, now: DateTime<Utc>) -> PathBuf {
    let name = format!("{}-{}.json", now.format("%Y%m%dT%H%M%S%.3fZ"), command.replace(' ', "-"));
    match out {
        Some(p) if p.is_dir() || p.as_os_str().to_string_lossy().ends_with(std::path::MAIN_SEPARATOR) => p.join(name),
        Some(p) => p.to_path_buf(),
        None => {
            let dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
            dir.join(name)
        }
    }
}

/// Write-temp-then-rename in the target directory.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let wrap = |source| CliError::Write { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(wrap)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(wrap)?;
    tmp.write_all(contents).map_err(wrap)?;
    tmp.as_file().sync_all().map_err(wrap)?;
    tmp.persist(path).map_err(|e| wrap(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn path_rules() {
        let now = DateTime::parse_from_rfc3339("2026-01-02T03:04:05.678Z").unwrap().with_timezone(&Utc);
        let dir = tempfile::tempdir().unwrap();
        let p = artifact_path(Some(dir.path()), "opa solve", now);
        assert_eq!(p, dir.path().join("20260102T030405.678Z-opa-solve.json"));
        assert_eq!(artifact_path(Some(Path::new("x/run.json")), "steer", now), PathBuf::from("x/run.json"));
    }

    #[test]
    fn atomic_write_creates_directories() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a/b/run.json");
        write_atomic(&p, b"{}").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "{}");
        assert_eq!(std::fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }

    #[test]
    fn artifact_fields() {
        let now = Utc::now();
        let a = RunArtifact::new("selftest", json!({}), json!([]), json!({}), now);
        assert_eq!(a.schema_version, SCHEMA_VERSION);
        assert!(a.created_at.ends_with('Z'));
    }
}

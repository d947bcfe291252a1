use std::path::PathBuf;

use serde_json::json;
use thiserror::Error;

/// Usage errors, as in sysexits.
pub const EXIT_USAGE: u8 = 64;
/// Artifact could not be written.
pub const EXIT_IO: u8 = 74;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] opa_core::Error),

    #[error("{}: {message}", path.display())]
    Input { path: PathBuf, message: String },

    #[error("config: {0}")]
    Config(String),

    #[error("writing {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },

    #[error("{failed} selftest check(s) failed")]
    Selftest { failed: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => e.class().exit_code() as u8,
            CliError::Input { .. } => 2,
            CliError::Config(_) => EXIT_USAGE,
            CliError::Write { .. } => EXIT_IO,
            CliError::Selftest { .. } => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Input { .. } => "invalid_input_file",
            CliError::Config(_) => "usage",
            CliError::Write { .. } => "io",
            CliError::Selftest { .. } => "selftest_failed",
        }
    }

    fn class(&self) -> &'static str {
        match self.exit_code() {
            2 => "domain",
            3 => "budget",
            EXIT_USAGE => "usage",
            _ => "io",
        }
    }

    /// Machine-readable error object printed on stdout.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "error": {
                "kind": self.kind(),
                "class": self.class(),
                "message": self.to_string(),
                "exit_code": self.exit_code(),
            }
        })
    }
}

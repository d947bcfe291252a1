//! `--config` file: flat TOML keys, all optional. Command-line flags win.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const CONVERGE_GRID: usize = 4096;
pub const CAPACITY_NODES: usize = 512;
pub const CAPACITY_ITERATIONS: usize = 2000;
pub const RUDIN_LEVELS: usize = 4;
pub const RUDIN_OUTPUT_DEGREE: usize = 1024;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub converge_grid: Option<usize>,
    pub capacity_nodes: Option<usize>,
    pub capacity_iterations: Option<usize>,
    pub rudin_levels: Option<usize>,
    pub rudin_grid_log2: Option<u32>,
    pub rudin_output_degree: Option<usize>,
    pub zerofree_max_level: Option<usize>,
    pub zerofree_max_degree: Option<usize>,
    pub zerofree_peak: Option<f64>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

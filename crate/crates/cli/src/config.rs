use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use transverse_qed::sweep::SweepRange;
use transverse_qed::variational::EnergyQuadrature;
use transverse_qed::{ModelParams, QuadratureSpec};

/// Everything a run needs. Every field has a default, so a config file only
/// lists what it changes; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub params: ModelParams,
    pub quad: QuadratureSpec,
    /// Outer (photon ball) and inner (k-space) rules of the theorem energies.
    pub energy_quad: EnergyQuadrature,
    pub sweep: SweepRange,
    /// Finest grid of the emergent refinement study.
    pub grid_n: usize,
    pub seed: u64,
    /// Worker threads, 0 for one per core.
    pub threads: usize,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: ModelParams::default(),
            quad: QuadratureSpec::default(),
            energy_quad: EnergyQuadrature::default(),
            sweep: SweepRange::default(),
            grid_n: 64,
            seed: 1,
            threads: 0,
            out: None,
        }
    }
}

#[derive(Debug)]
pub enum ConfigError {
    Read(PathBuf, std::io::Error),
    Parse(String),
    Invalid(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Read(path, e) => write!(f, "cannot read {}: {e}", path.display()),
            ConfigError::Parse(msg) => write!(f, "bad config: {msg}"),
            ConfigError::Invalid(msg) => write!(f, "invalid config: {msg}"),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|e| ConfigError::Read(path.to_path_buf(), e))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    /// Grid sizes of the refinement study: `n/2`, `3n/4` and `n`.
    pub fn grid_sizes(&self) -> [usize; 3] {
        [self.grid_n / 2, 3 * self.grid_n / 4, self.grid_n]
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |e: transverse_qed::Error| ConfigError::Invalid(e.to_string());
        self.params.validate().map_err(invalid)?;
        self.quad.validate().map_err(invalid)?;
        self.energy_quad.outer.validate().map_err(invalid)?;
        self.energy_quad.inner.validate().map_err(invalid)?;
        self.sweep.validate().map_err(invalid)?;
        // the coarsest study grid must still resolve the blob away from the walls
        if self.grid_n < 64 || !self.grid_n.is_multiple_of(4) {
            return Err(ConfigError::Invalid(format!(
                "grid_n must be a multiple of 4 and at least 64, got {}",
                self.grid_n
            )));
        }
        Ok(())
    }
}

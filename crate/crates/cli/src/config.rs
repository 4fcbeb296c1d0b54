//! Run configuration (TOML or JSON). Relative paths resolve against the
//! directory holding the config file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use outage_core::engine::{Method, SimulationConfig};
use outage_core::time::Timestamp;
use outage_core::wind::WindFieldSpec;

use crate::error::CliError;

pub const DEFAULT_N_RUNS: usize = 10_000;
pub const DEFAULT_SWEEP_DTS: [i64; 3] = [600, 3600, 7200];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    #[serde(default = "default_n_runs")]
    pub n_runs: usize,
    #[serde(default = "default_dt")]
    pub dt_s: i64,
    pub start: Timestamp,
    pub end: Timestamp,
    #[serde(default = "default_method")]
    pub method: Method,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub store_status: bool,
}

fn default_n_runs() -> usize {
    DEFAULT_N_RUNS
}

fn default_dt() -> i64 {
    outage_core::wind::DEFAULT_DT_S
}

fn default_method() -> Method {
    Method::Hrsra
}

fn default_true() -> bool {
    true
}

impl SimulationSection {
    pub fn to_config(&self) -> SimulationConfig {
        SimulationConfig {
            n_runs: self.n_runs,
            dt_s: self.dt_s,
            start: self.start,
            end: self.end,
            method: self.method,
            master_seed: self.master_seed,
            store_status: self.store_status,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputsSection {
    pub network: Option<PathBuf>,
    pub fragility: Option<PathBuf>,
    pub track: Option<PathBuf>,
    /// Precomputed wind-field directory; takes precedence over `track`.
    pub windfield: Option<PathBuf>,
    pub observed: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    /// Also write the per-region long-form table.
    #[serde(default = "default_true")]
    pub regional: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: None, regional: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub dts: Vec<i64>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self { dts: DEFAULT_SWEEP_DTS.to_vec() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub simulation: SimulationSection,
    pub wind: Option<WindFieldSpec>,
    #[serde(default)]
    pub inputs: InputsSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub sweep: SweepSection,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input("Io", format!("{}: {e}", path.display())))?;
        let bad = |e: String| CliError::input("MalformedFile", format!("{}: {e}", path.display()));
        let mut cfg: RunConfig = match path.extension().and_then(|e| e.to_str()) {
            Some("json") => serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?,
            _ => toml::from_str(&text).map_err(|e| bad(e.to_string()))?,
        };
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut Option<PathBuf>| {
            if let Some(path) = p.as_mut() {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        };
        fix(&mut self.inputs.network);
        fix(&mut self.inputs.fragility);
        fix(&mut self.inputs.track);
        fix(&mut self.inputs.windfield);
        fix(&mut self.inputs.observed);
        fix(&mut self.output.dir);
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}

/// Required config entry or an input error naming it.
pub fn require<'a>(value: &'a Option<PathBuf>, key: &str) -> Result<&'a Path, CliError> {
    value.as_deref().ok_or_else(|| CliError::input("MissingConfig", format!("config needs `{key}`")))
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use outage_core::engine::Method;

#[derive(Debug, Parser)]
#[command(name = "outage-sim", version, about = "Hurricane wind fields and feeder outage ensembles")]
pub struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Repeat for more log output.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Command {
    /// Generate and export gridded wind fields from a storm track.
    Windfield(WindfieldArgs),
    /// Run a Monte Carlo outage ensemble.
    Simulate(SimulateArgs),
    /// Score ensembles against an observed outage record.
    Compare(CompareArgs),
    /// Fit regional fragility parameters to observed outages.
    Calibrate(CalibrateArgs),
    /// Write a synthetic network, track, fragility table and observed record.
    Synth(SynthArgs),
    /// Rerun both samplers over several time steps.
    Sweep(SweepArgs),
    /// Re-execute a recorded run and check its outputs are unchanged.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct WindfieldArgs {
    /// Run config supplying track, wind grid, window and dt.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub track: Option<PathBuf>,
    /// `lat_min,lat_max,lon_min,lon_max`
    #[arg(long, allow_hyphen_values = true)]
    pub bbox: Option<String>,
    /// Cell size in degrees.
    #[arg(long)]
    pub cell_size: Option<f64>,
    #[arg(long)]
    pub dt: Option<i64>,
    /// Window start (ISO 8601); defaults to the first track fix.
    #[arg(long)]
    pub start: Option<String>,
    #[arg(long)]
    pub end: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long)]
    pub dt: Option<i64>,
    #[arg(long)]
    pub n_runs: Option<usize>,
    /// Output directory (overrides the config's).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CompareArgs {
    /// Ensemble directory written by `simulate`; repeatable.
    #[arg(long = "ensemble", required = true)]
    pub ensembles: Vec<PathBuf>,
    #[arg(long)]
    pub observed: PathBuf,
    /// Resolution table JSON written by `sweep`, attached to each report.
    #[arg(long)]
    pub resolution_table: Option<PathBuf>,
    #[arg(long, default_value_t = 0.01)]
    pub q_low: f64,
    #[arg(long, default_value_t = 0.99)]
    pub q_high: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    /// One fit per region against that region's observed series.
    Region,
    /// One system-wide fit against the `total` series, applied to every region.
    Total,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CalibrateArgs {
    #[arg(long)]
    pub observed: PathBuf,
    /// Wind-field directory written by `windfield`.
    #[arg(long)]
    pub windfield: PathBuf,
    #[arg(long)]
    pub network: PathBuf,
    #[arg(long, value_enum, default_value_t = Scope::Region)]
    pub scope: Scope,
    /// Fragility CSV to write.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SynthArgs {
    #[arg(long, default_value_t = outage_core::synth::REFERENCE_FEEDERS)]
    pub feeders: usize,
    #[arg(long, default_value_t = 7)]
    pub regions: usize,
    #[arg(long, default_value_t = outage_core::synth::REFERENCE_TOTAL_LOAD_MW)]
    pub total_load: f64,
    /// Seed of the network generator.
    #[arg(long, default_value_t = 2022)]
    pub seed: u64,
    /// Runs written into the generated config.
    #[arg(long, default_value_t = crate::config::DEFAULT_N_RUNS)]
    pub n_runs: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Comma-separated time steps in seconds (overrides the config's).
    #[arg(long, value_delimiter = ',')]
    pub dts: Option<Vec<i64>>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub n_runs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Where to write the replayed outputs (default: the recorded location).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Hrsra,
    Smc,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Hrsra => Method::Hrsra,
            MethodArg::Smc => Method::Smc,
        }
    }
}

fn absolute(p: &mut PathBuf) {
    if let Ok(abs) = std::path::absolute(&*p) {
        *p = abs;
    }
}

fn absolute_opt(p: &mut Option<PathBuf>) {
    if let Some(p) = p.as_mut() {
        absolute(p);
    }
}

impl Command {
    /// Makes every path absolute so the command can be replayed from anywhere.
    pub fn absolutize(&mut self) {
        match self {
            Command::Windfield(a) => {
                absolute_opt(&mut a.config);
                absolute_opt(&mut a.track);
                absolute(&mut a.out);
            }
            Command::Simulate(a) => {
                absolute(&mut a.config);
                absolute_opt(&mut a.out);
            }
            Command::Compare(a) => {
                a.ensembles.iter_mut().for_each(absolute);
                absolute(&mut a.observed);
                absolute_opt(&mut a.resolution_table);
                absolute(&mut a.out);
            }
            Command::Calibrate(a) => {
                absolute(&mut a.observed);
                absolute(&mut a.windfield);
                absolute(&mut a.network);
                absolute(&mut a.out);
            }
            Command::Synth(a) => absolute(&mut a.out),
            Command::Sweep(a) => {
                absolute(&mut a.config);
                absolute_opt(&mut a.out);
            }
            Command::Replay(a) => {
                absolute(&mut a.manifest);
                absolute_opt(&mut a.out);
            }
        }
    }

    pub fn set_out(&mut self, out: PathBuf) {
        match self {
            Command::Windfield(a) => a.out = out,
            Command::Simulate(a) => a.out = Some(out),
            Command::Compare(a) => a.out = out,
            Command::Calibrate(a) => a.out = out,
            Command::Synth(a) => a.out = out,
            Command::Sweep(a) => a.out = Some(out),
            Command::Replay(a) => a.out = Some(out),
        }
    }
}

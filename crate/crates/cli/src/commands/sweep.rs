use outage_core::analytics::{parse_observed, resolution_sweep, AnalyticsError, SweepScenario, TOTAL};
use outage_core::wind::parse_track;

use super::simulate::load_scenario;
use super::{write_text, Outcome};
use crate::cli::SweepArgs;
use crate::config::{require, RunConfig};
use crate::error::CliError;

pub fn run(args: &SweepArgs) -> Result<Outcome, CliError> {
    let cfg = RunConfig::load(&args.config)?;
    let dts = args.dts.clone().unwrap_or(cfg.sweep.dts.clone());
    if dts.is_empty() {
        return Err(CliError::input("InvalidArgument", "no time steps to sweep"));
    }
    let out = args
        .out
        .clone()
        .or(cfg.output.dir.clone())
        .ok_or_else(|| CliError::input("MissingArgument", "--out or output.dir is required"))?;
    let mut scenario = load_scenario(&cfg, &args.config)?;
    let track_path = require(&cfg.inputs.track, "inputs.track")?;
    let observed_path = require(&cfg.inputs.observed, "inputs.observed")?;
    let spec = cfg.wind.ok_or_else(|| CliError::input("MissingConfig", "config needs a [wind] section"))?;
    let track = parse_track(track_path)?;
    let observed = parse_observed(observed_path)?;
    let total = observed.get(TOTAL).ok_or_else(|| AnalyticsError::InvalidObserved {
        region: TOTAL.into(),
        reason: "no system-wide series in the observed file".into(),
    })?;
    let n_runs = args.n_runs.unwrap_or(cfg.simulation.n_runs);
    let master_seed = args.seed.unwrap_or(cfg.simulation.master_seed);
    let table = resolution_sweep(
        &SweepScenario {
            network: &scenario.network,
            fragility: &scenario.fragility,
            track: &track,
            wind: spec,
            start: cfg.simulation.start,
            end: cfg.simulation.end,
            n_runs,
            master_seed,
        },
        &dts,
        total,
    )?;

    let mut outcome = Outcome::in_dir(&out);
    scenario.inputs.extend([track_path.to_path_buf(), observed_path.to_path_buf()]);
    outcome.inputs = scenario.inputs;
    outcome.outputs.push(write_text(&out.join("resolution_table.csv"), &table.to_csv())?);
    let json = serde_json::to_string_pretty(&table).expect("table serializes") + "\n";
    outcome.outputs.push(write_text(&out.join("resolution_table.json"), &json)?);
    outcome.config = serde_json::json!({ "dts": dts, "n_runs": n_runs, "wind": spec });
    outcome.master_seed = Some(master_seed);
    Ok(outcome)
}

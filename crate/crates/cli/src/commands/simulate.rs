use std::path::{Path, PathBuf};

use outage_core::engine::io::{ENSEMBLE_CSV, REGIONS_CSV, SUMMARY_JSON};
use outage_core::engine::{write_ensemble, OutageModel, SimulationConfig};
use outage_core::network::{parse_fragility, parse_network, Network, RegionFragilityTable};
use outage_core::wind::{import_wind_fields, parse_track, WindFieldSeries};

use super::Outcome;
use crate::cli::SimulateArgs;
use crate::config::{require, RunConfig};
use crate::error::CliError;

/// Network, fragility and wind named by a config, plus the files they came from.
pub struct Scenario {
    pub network: Network,
    pub fragility: RegionFragilityTable,
    pub inputs: Vec<PathBuf>,
}

pub fn load_scenario(cfg: &RunConfig, config_path: &Path) -> Result<Scenario, CliError> {
    let network_path = require(&cfg.inputs.network, "inputs.network")?;
    let fragility_path = require(&cfg.inputs.fragility, "inputs.fragility")?;
    let network = parse_network(network_path)?;
    let fragility = parse_fragility(fragility_path)?;
    fragility.check_covers(&network)?;
    Ok(Scenario {
        network,
        fragility,
        inputs: vec![config_path.to_path_buf(), network_path.to_path_buf(), fragility_path.to_path_buf()],
    })
}

/// Wind for `sim`: the precomputed directory if configured, else generated from the track.
pub fn load_wind(cfg: &RunConfig, sim: &SimulationConfig, inputs: &mut Vec<PathBuf>) -> Result<WindFieldSeries, CliError> {
    if let Some(dir) = &cfg.inputs.windfield {
        inputs.push(dir.clone());
        return Ok(import_wind_fields(dir)?);
    }
    let track_path = require(&cfg.inputs.track, "inputs.track or inputs.windfield")?;
    let spec = cfg
        .wind
        .ok_or_else(|| CliError::input("MissingConfig", "config needs a [wind] section to generate fields"))?;
    inputs.push(track_path.to_path_buf());
    let track = parse_track(track_path)?;
    Ok(spec.generate_window(&track, sim.start, sim.end, sim.dt_s)?)
}

pub fn run(args: &SimulateArgs) -> Result<Outcome, CliError> {
    let cfg = RunConfig::load(&args.config)?;
    let mut sim = cfg.simulation.to_config();
    if let Some(s) = args.seed {
        sim.master_seed = s;
    }
    if let Some(m) = args.method {
        sim.method = m.into();
    }
    if let Some(dt) = args.dt {
        sim.dt_s = dt;
    }
    if let Some(n) = args.n_runs {
        sim.n_runs = n;
    }
    sim.validate()?;
    let out = args
        .out
        .clone()
        .or(cfg.output.dir.clone())
        .ok_or_else(|| CliError::input("MissingArgument", "--out or output.dir is required"))?;

    let mut scenario = load_scenario(&cfg, &args.config)?;
    let wind = load_wind(&cfg, &sim, &mut scenario.inputs)?;
    let model = OutageModel::build(&scenario.network, &scenario.fragility, &wind, &sim)?;
    let ensemble = model.simulate(&sim)?;
    let echo = serde_json::json!({ "simulation": sim, "wind": cfg.wind });
    let summary = write_ensemble(&ensemble, &out, cfg.output.regional, echo.clone())?;
    log::info!(
        "{} runs x {} steps, mean final outage {:.3}%",
        summary.n_runs,
        summary.n_steps,
        summary.mean_final_p_fail_pct
    );

    let mut outcome = Outcome::in_dir(&out);
    outcome.inputs = scenario.inputs;
    outcome.outputs.push(out.join(ENSEMBLE_CSV));
    if cfg.output.regional {
        outcome.outputs.push(out.join(REGIONS_CSV));
    }
    outcome.outputs.push(out.join(SUMMARY_JSON));
    outcome.config = echo;
    outcome.master_seed = Some(sim.master_seed);
    Ok(outcome)
}

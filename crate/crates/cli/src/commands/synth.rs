use std::path::PathBuf;

use outage_core::analytics::observed_to_csv;
use outage_core::engine::{Method, OutageModel};
use outage_core::network::{write_fragility, write_network};
use outage_core::synth::{
    fragility_for_regions, reference_track, reference_window, synth_network, synth_observed, SynthNetworkConfig,
};
use outage_core::time::time_grid;
use outage_core::wind::{write_track, WindFieldSpec, DEFAULT_DT_S};

use super::{create_dir, write_text, Outcome};
use crate::cli::SynthArgs;
use crate::config::{InputsSection, OutputSection, RunConfig, SimulationSection, SweepSection};
use crate::error::CliError;

pub const NETWORK_FILE: &str = "network.json";
pub const FRAGILITY_FILE: &str = "fragility.csv";
pub const TRACK_FILE: &str = "track.csv";
pub const OBSERVED_FILE: &str = "observed.csv";
pub const CONFIG_FILE: &str = "config.toml";

pub fn run(args: &SynthArgs) -> Result<Outcome, CliError> {
    let net_cfg = SynthNetworkConfig {
        n_feeders: args.feeders,
        n_regions: args.regions,
        total_load_mw: args.total_load,
        seed: args.seed,
        ..Default::default()
    };
    let network = synth_network(&net_cfg)?;
    let fragility = fragility_for_regions(network.regions());
    let track = reference_track();
    let (start, end) = reference_window();
    let spec = WindFieldSpec::new(net_cfg.bbox);

    // the observed record is the resistance sampler's expectation on the 10-minute grid
    let wind = spec.generate_window(&track, start, end, DEFAULT_DT_S)?;
    let model = OutageModel::build_at(&network, &fragility, &wind, time_grid(start, end, DEFAULT_DT_S))?;
    let observed = synth_observed(&model);

    create_dir(&args.out)?;
    let path = |name: &str| -> PathBuf { args.out.join(name) };
    write_network(&network, path(NETWORK_FILE))?;
    write_fragility(&fragility, path(FRAGILITY_FILE))?;
    write_track(&track, path(TRACK_FILE))?;
    write_text(&path(OBSERVED_FILE), &observed_to_csv(&observed))?;

    let run_cfg = RunConfig {
        simulation: SimulationSection {
            n_runs: args.n_runs,
            dt_s: DEFAULT_DT_S,
            start,
            end,
            method: Method::Hrsra,
            master_seed: 1,
            store_status: false,
        },
        wind: Some(spec),
        inputs: InputsSection {
            network: Some(NETWORK_FILE.into()),
            fragility: Some(FRAGILITY_FILE.into()),
            track: Some(TRACK_FILE.into()),
            windfield: None,
            observed: Some(OBSERVED_FILE.into()),
        },
        output: OutputSection { dir: Some("out".into()), regional: true },
        sweep: SweepSection::default(),
    };
    write_text(&path(CONFIG_FILE), &run_cfg.to_toml())?;
    log::info!("{} feeders in {} regions, {:.1} MW", network.len(), network.regions().len(), network.total_load_mw());

    let mut outcome = Outcome::in_dir(&args.out);
    outcome.outputs = [NETWORK_FILE, FRAGILITY_FILE, TRACK_FILE, OBSERVED_FILE, CONFIG_FILE].iter().map(|n| path(n)).collect();
    outcome.config = serde_json::json!({ "network": net_cfg, "n_runs": args.n_runs });
    outcome.master_seed = Some(args.seed);
    Ok(outcome)
}

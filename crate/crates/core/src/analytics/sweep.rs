use serde::{Deserialize, Serialize};

use super::observed::ObservedOutageSeries;
use super::rmse::avg_rmse;
use super::AnalyticsError;
use crate::engine::{Method, OutageModel, SimulationConfig};
use crate::network::{Network, RegionFragilityTable};
use crate::time::Timestamp;
use crate::wind::{TcTrack, WindFieldSpec};

/// Fixed inputs of a sweep; only the time step varies between entries.
#[derive(Debug, Clone, Copy)]
pub struct SweepScenario<'a> {
    pub network: &'a Network,
    pub fragility: &'a RegionFragilityTable,
    pub track: &'a TcTrack,
    pub wind: WindFieldSpec,
    pub start: Timestamp,
    pub end: Timestamp,
    pub n_runs: usize,
    pub master_seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub method: Method,
    pub dt_s: i64,
    pub avg_rmse: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ResolutionTable {
    pub entries: Vec<SweepEntry>,
}

impl ResolutionTable {
    pub fn get(&self, method: Method, dt_s: i64) -> Option<f64> {
        self.entries.iter().find(|e| e.method == method && e.dt_s == dt_s).map(|e| e.avg_rmse)
    }

    /// `method,dt_s,avg_rmse`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,dt_s,avg_rmse\n");
        for e in &self.entries {
            out.push_str(&format!("{},{},{}\n", e.method, e.dt_s, e.avg_rmse));
        }
        out
    }
}

/// Regenerates the wind field and reruns both samplers at every `dt`, all
/// with the same master seed, scoring each against `observed`.
pub fn resolution_sweep(
    scenario: &SweepScenario<'_>,
    dts: &[i64],
    observed: &ObservedOutageSeries,
) -> Result<ResolutionTable, AnalyticsError> {
    let mut table = ResolutionTable::default();
    for &dt_s in dts {
        let cfg = SimulationConfig {
            n_runs: scenario.n_runs,
            dt_s,
            start: scenario.start,
            end: scenario.end,
            method: Method::Hrsra,
            master_seed: scenario.master_seed,
            store_status: false,
        };
        cfg.validate()?;
        let wind = scenario.wind.generate_window(scenario.track, scenario.start, scenario.end, dt_s)?;
        let model = OutageModel::build(scenario.network, scenario.fragility, &wind, &cfg)?;
        for method in [Method::Hrsra, Method::Smc] {
            let ens = model.run(method, cfg.n_runs, cfg.master_seed, false);
            let avg_rmse = avg_rmse(observed, &ens.total)?;
            log::info!("sweep {method} dt={dt_s}s avg_rmse={avg_rmse:.4}");
            table.entries.push(SweepEntry { method, dt_s, avg_rmse });
        }
    }
    table.entries.sort_by_key(|e| (e.method, e.dt_s));
    Ok(table)
}

//! The per-run outage simulation loop for both samplers.
//!
//! Gusts at every feeder and step are evaluated once up front; runs then only
//! touch that matrix. Each run is a pure function of `(inputs, seed, run
//! index)`, so the ensemble is identical for any number of worker threads.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::config::{Method, SimulationConfig};
use super::ensemble::{FeederStatus, OutageEnsemble, RngTrace, Trajectories};
use super::fragility::{fragility_prob, resistance_unchecked};
use super::philox::{Domain, StreamKey};
use super::EngineError;
use crate::network::{feeder_design_wind_at_step, FragilityParams, Network, RegionFragilityTable};
use crate::time::Timestamp;
use crate::wind::WindFieldSeries;
use crate::MPH_PER_MS;

#[derive(Debug, Clone)]
enum Loads {
    Constant(Vec<f64>),
    /// feeder-major, one value per step
    Varying(Vec<f64>),
}

/// Everything a run needs: per-feeder gusts over time, fragility, loads, regions.
#[derive(Debug, Clone)]
pub struct OutageModel {
    timestamps: Vec<Timestamp>,
    n_feeders: usize,
    /// feeder-major design gust, mph
    gust_mph: Vec<f64>,
    fragility: Vec<FragilityParams>,
    region_of: Vec<usize>,
    regions: Vec<String>,
    loads: Loads,
}

struct RunOutput {
    total: Vec<f64>,
    regional: Vec<f64>,
    failure_step: Vec<u32>,
}

impl OutageModel {
    /// Samples the wind field at every feeder for the timestamps of `cfg`.
    pub fn build(
        network: &Network,
        table: &RegionFragilityTable,
        wind: &WindFieldSeries,
        cfg: &SimulationConfig,
    ) -> Result<Self, EngineError> {
        cfg.validate()?;
        Self::build_at(network, table, wind, cfg.timestamps())
    }

    pub fn build_at(
        network: &Network,
        table: &RegionFragilityTable,
        wind: &WindFieldSeries,
        timestamps: Vec<Timestamp>,
    ) -> Result<Self, EngineError> {
        let fragility = table.per_feeder(network).map_err(|e| EngineError::CoverageGap(e.to_string()))?;
        network.check_within(wind.bbox()).map_err(|e| EngineError::CoverageGap(e.to_string()))?;
        let steps = timestamps
            .iter()
            .map(|t| wind.step_at(*t))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| EngineError::CoverageGap(e.to_string()))?;

        let rows: Vec<Vec<f64>> = network
            .feeders()
            .par_iter()
            .map(|f| {
                steps
                    .iter()
                    .map(|&s| feeder_design_wind_at_step(f, wind, s).map(|g| g * MPH_PER_MS))
                    .collect::<Result<Vec<f64>, _>>()
            })
            .collect::<Result<_, _>>()
            .map_err(|e| EngineError::CoverageGap(e.to_string()))?;

        let loads = if network.has_load_curves() {
            Loads::Varying(
                network
                    .feeders()
                    .iter()
                    .flat_map(|f| timestamps.iter().map(move |t| f.load_at(*t)))
                    .collect(),
            )
        } else {
            Loads::Constant(network.feeders().iter().map(|f| f.load_mw).collect())
        };

        Ok(Self {
            n_feeders: network.len(),
            gust_mph: rows.concat(),
            fragility,
            region_of: network.region_indices(),
            regions: network.regions().to_vec(),
            loads,
            timestamps,
        })
    }

    /// Model from a precomputed gust matrix (`gust_mph[i]` is feeder `i`'s
    /// series), all feeders in one region with constant loads.
    pub fn from_gusts(
        timestamps: Vec<Timestamp>,
        gust_mph: Vec<Vec<f64>>,
        loads_mw: Vec<f64>,
        fragility: Vec<FragilityParams>,
    ) -> Result<Self, EngineError> {
        let n = gust_mph.len();
        if loads_mw.len() != n || fragility.len() != n {
            return Err(EngineError::InvalidConfig("gust, load and fragility lengths differ".into()));
        }
        if gust_mph.iter().any(|r| r.len() != timestamps.len()) {
            return Err(EngineError::InvalidConfig("gust series length differs from timestamps".into()));
        }
        if gust_mph.iter().flatten().any(|g| !(g.is_finite() && *g >= 0.0)) {
            return Err(EngineError::InvalidConfig("gusts must be finite and >= 0".into()));
        }
        Ok(Self {
            n_feeders: n,
            gust_mph: gust_mph.concat(),
            fragility,
            region_of: vec![0; n],
            regions: vec!["all".to_string()],
            loads: Loads::Constant(loads_mw),
            timestamps,
        })
    }

    pub fn timestamps(&self) -> &[Timestamp] {
        &self.timestamps
    }

    pub fn n_feeders(&self) -> usize {
        self.n_feeders
    }

    pub fn gust_series(&self, feeder: usize) -> &[f64] {
        let t = self.timestamps.len();
        &self.gust_mph[feeder * t..(feeder + 1) * t]
    }

    /// Running maximum of each feeder's gust; failure time under a fixed
    /// resistance is the first step where this exceeds it.
    fn running_max(&self) -> Vec<f64> {
        let t = self.timestamps.len();
        let mut out = self.gust_mph.clone();
        for row in out.chunks_mut(t) {
            for k in 1..row.len() {
                row[k] = row[k].max(row[k - 1]);
            }
        }
        out
    }

    fn fragility_matrix(&self) -> Vec<f64> {
        let t = self.timestamps.len();
        self.gust_mph
            .par_chunks(t)
            .zip(self.fragility.par_iter())
            .flat_map_iter(|(row, p)| row.iter().map(move |w| fragility_prob(*w, p)))
            .collect()
    }

    pub fn simulate(&self, cfg: &SimulationConfig) -> Result<OutageEnsemble, EngineError> {
        cfg.validate()?;
        if cfg.timestamps() != self.timestamps {
            return Err(EngineError::InvalidConfig("config time grid differs from the model's".into()));
        }
        Ok(self.run(cfg.method, cfg.n_runs, cfg.master_seed, cfg.store_status))
    }

    /// Runs `n_runs` realisations; run `j` reads Philox stream `(seed, j)`.
    pub fn run(&self, method: Method, n_runs: usize, master_seed: u64, store_status: bool) -> OutageEnsemble {
        let n_steps = self.timestamps.len();
        let outputs: Vec<RunOutput> = match method {
            Method::Hrsra => {
                let runmax = self.running_max();
                let key = StreamKey::new(master_seed, Domain::Resistance);
                (0..n_runs)
                    .into_par_iter()
                    .map(|j| {
                        let fs: Vec<u32> = (0..self.n_feeders)
                            .map(|i| {
                                let r = key.uniform(j as u32, i as u32, 0);
                                let resistance = resistance_unchecked(r, &self.fragility[i]);
                                let series = &runmax[i * n_steps..(i + 1) * n_steps];
                                // strict exceedance: w > R fails
                                let k = series.partition_point(|w| *w <= resistance);
                                if k == n_steps {
                                    FeederStatus::SURVIVED
                                } else {
                                    k as u32
                                }
                            })
                            .collect();
                        self.aggregate(fs, store_status)
                    })
                    .collect()
            }
            Method::Smc => {
                let probs = self.fragility_matrix();
                let ticks: Vec<i64> = self.timestamps.iter().map(|t| t.timestamp()).collect();
                let key = StreamKey::new(master_seed, Domain::StatusTrial);
                (0..n_runs)
                    .into_par_iter()
                    .map(|j| {
                        let fs: Vec<u32> = (0..self.n_feeders)
                            .map(|i| {
                                let row = &probs[i * n_steps..(i + 1) * n_steps];
                                row.iter()
                                    .zip(&ticks)
                                    .position(|(&f, &tick)| f > 0.0 && key.uniform(j as u32, i as u32, tick) <= f)
                                    .map_or(FeederStatus::SURVIVED, |k| k as u32)
                            })
                            .collect();
                        self.aggregate(fs, store_status)
                    })
                    .collect()
            }
        };
        self.assemble(method, n_runs, master_seed, outputs, store_status)
    }

    fn aggregate(&self, failure_step: Vec<u32>, keep: bool) -> RunOutput {
        let n_steps = self.timestamps.len();
        let n_regions = self.regions.len();
        let mut total = vec![0.0; n_steps];
        let mut regional = vec![0.0; n_regions * n_steps];
        match &self.loads {
            Loads::Constant(loads) => {
                let mut region_load = vec![0.0; n_regions];
                let mut region_size = vec![0usize; n_regions];
                let mut system_load = 0.0;
                let mut failed_now = vec![0usize; n_steps];
                let mut region_failed_now = vec![0usize; n_regions * n_steps];
                for (i, &l) in loads.iter().enumerate() {
                    let r = self.region_of[i];
                    system_load += l;
                    region_load[r] += l;
                    region_size[r] += 1;
                    let s = failure_step[i];
                    if s != FeederStatus::SURVIVED {
                        total[s as usize] += l;
                        failed_now[s as usize] += 1;
                        regional[r * n_steps + s as usize] += l;
                        region_failed_now[r * n_steps + s as usize] += 1;
                    }
                }
                to_percent(&mut total, &failed_now, system_load, self.n_feeders);
                for (r, (chunk, counts)) in
                    regional.chunks_mut(n_steps).zip(region_failed_now.chunks(n_steps)).enumerate()
                {
                    to_percent(chunk, counts, region_load[r], region_size[r]);
                }
            }
            Loads::Varying(loads) => {
                let mut region_load = vec![0.0; n_regions * n_steps];
                let mut system_load = vec![0.0; n_steps];
                for i in 0..self.n_feeders {
                    let r = self.region_of[i];
                    let s = failure_step[i];
                    for t in 0..n_steps {
                        let l = loads[i * n_steps + t];
                        system_load[t] += l;
                        region_load[r * n_steps + t] += l;
                        if s != FeederStatus::SURVIVED && s as usize <= t {
                            total[t] += l;
                            regional[r * n_steps + t] += l;
                        }
                    }
                }
                for t in 0..n_steps {
                    total[t] = ratio_percent(total[t], system_load[t]);
                }
                for (k, v) in regional.iter_mut().enumerate() {
                    *v = ratio_percent(*v, region_load[k]);
                }
            }
        }
        RunOutput { total, regional, failure_step: if keep { failure_step } else { Vec::new() } }
    }

    fn assemble(
        &self,
        method: Method,
        n_runs: usize,
        master_seed: u64,
        outputs: Vec<RunOutput>,
        store_status: bool,
    ) -> OutageEnsemble {
        let n_steps = self.timestamps.len();
        let mut total = Vec::with_capacity(n_runs * n_steps);
        let mut regional: Vec<Vec<f64>> = vec![Vec::with_capacity(n_runs * n_steps); self.regions.len()];
        let mut status = Vec::new();
        for out in outputs {
            total.extend_from_slice(&out.total);
            for (r, chunk) in out.regional.chunks(n_steps).enumerate() {
                regional[r].extend_from_slice(chunk);
            }
            status.extend_from_slice(&out.failure_step);
        }
        let regions: BTreeMap<String, Trajectories> = self
            .regions
            .iter()
            .cloned()
            .zip(regional)
            .map(|(name, v)| (name, Trajectories::new(self.timestamps.clone(), n_runs, v)))
            .collect();
        OutageEnsemble {
            method,
            total: Trajectories::new(self.timestamps.clone(), n_runs, total),
            regions,
            status: store_status.then(|| FeederStatus::new(self.n_feeders, n_steps, status)),
            rng_trace: RngTrace {
                generator: "philox4x32-10".into(),
                master_seed,
                first_stream: 0,
                n_streams: n_runs as u64,
            },
        }
    }

    /// Expected outage under the resistance sampler, in closed form:
    /// E[p(t)] = 100 · Σ L_i F_i(max_{s≤t} w_i(s)) / Σ L_i, total and per region.
    pub fn expected_outage(&self) -> (Vec<f64>, BTreeMap<String, Vec<f64>>) {
        let n_steps = self.timestamps.len();
        let runmax = self.running_max();
        let mut total = vec![0.0; n_steps];
        let mut system = vec![0.0; n_steps];
        let mut regional = vec![vec![0.0; n_steps]; self.regions.len()];
        let mut region_load = vec![vec![0.0; n_steps]; self.regions.len()];
        for i in 0..self.n_feeders {
            let r = self.region_of[i];
            for t in 0..n_steps {
                let l = match &self.loads {
                    Loads::Constant(v) => v[i],
                    Loads::Varying(v) => v[i * n_steps + t],
                };
                let f = fragility_prob(runmax[i * n_steps + t], &self.fragility[i]);
                total[t] += l * f;
                system[t] += l;
                regional[r][t] += l * f;
                region_load[r][t] += l;
            }
        }
        let pct = |num: &[f64], den: &[f64]| -> Vec<f64> {
            num.iter().zip(den).map(|(n, d)| ratio_percent(*n, *d)).collect()
        };
        let per_region = self
            .regions
            .iter()
            .enumerate()
            .map(|(r, name)| (name.clone(), pct(&regional[r], &region_load[r])))
            .collect();
        (pct(&total, &system), per_region)
    }
}

/// Turns per-step failed-load increments into cumulative percent of `load`;
/// once all `members` have failed the level is exactly 100.
fn to_percent(increments: &mut [f64], failed: &[usize], load: f64, members: usize) {
    let mut cum = 0.0;
    let mut count = 0;
    for (v, n) in increments.iter_mut().zip(failed) {
        cum += *v;
        count += n;
        *v = if count == members && members > 0 && load > 0.0 { 100.0 } else { ratio_percent(cum, load) };
    }
}

fn ratio_percent(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        (100.0 * (num / den)).min(100.0)
    } else {
        0.0
    }
}

/// Resistance-sampler ensemble on a network and wind field.
pub fn run_hrsra(
    network: &Network,
    table: &RegionFragilityTable,
    wind: &WindFieldSeries,
    cfg: &SimulationConfig,
) -> Result<OutageEnsemble, EngineError> {
    let cfg = SimulationConfig { method: Method::Hrsra, ..cfg.clone() };
    OutageModel::build(network, table, wind, &cfg)?.simulate(&cfg)
}

/// Sequential per-step sampler ensemble on a network and wind field.
pub fn run_smc(
    network: &Network,
    table: &RegionFragilityTable,
    wind: &WindFieldSeries,
    cfg: &SimulationConfig,
) -> Result<OutageEnsemble, EngineError> {
    let cfg = SimulationConfig { method: Method::Smc, ..cfg.clone() };
    OutageModel::build(network, table, wind, &cfg)?.simulate(&cfg)
}

/// Dispatches on `cfg.method`.
pub fn simulate(
    network: &Network,
    table: &RegionFragilityTable,
    wind: &WindFieldSeries,
    cfg: &SimulationConfig,
) -> Result<OutageEnsemble, EngineError> {
    OutageModel::build(network, table, wind, cfg)?.simulate(cfg)
}

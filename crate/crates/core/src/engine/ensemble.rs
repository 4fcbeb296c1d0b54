use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::Method;
use crate::time::Timestamp;

/// Run-major matrix of outage levels (percent of load), one row per run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectories {
    timestamps: Vec<Timestamp>,
    n_runs: usize,
    values: Vec<f64>,
}

impl Trajectories {
    pub fn new(timestamps: Vec<Timestamp>, n_runs: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), n_runs * timestamps.len(), "trajectory matrix shape");
        Self { timestamps, n_runs, values }
    }

    pub fn from_rows(timestamps: Vec<Timestamp>, rows: &[Vec<f64>]) -> Self {
        let values: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::new(timestamps, rows.len(), values)
    }

    pub fn timestamps(&self) -> &[Timestamp] {
        &self.timestamps
    }

    pub fn n_runs(&self) -> usize {
        self.n_runs
    }

    pub fn n_steps(&self) -> usize {
        self.timestamps.len()
    }

    pub fn row(&self, run: usize) -> &[f64] {
        let t = self.n_steps();
        &self.values[run * t..(run + 1) * t]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.n_steps().max(1))
    }

    pub fn column(&self, step: usize) -> Vec<f64> {
        (0..self.n_runs).map(|j| self.values[j * self.n_steps() + step]).collect()
    }

    pub fn mean(&self) -> Vec<f64> {
        let mut acc = vec![0.0; self.n_steps()];
        for row in self.rows() {
            for (a, v) in acc.iter_mut().zip(row) {
                *a += v;
            }
        }
        acc.iter().map(|a| a / self.n_runs as f64).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Per-run failure step of every feeder; `u32::MAX` marks survival.
#[derive(Debug, Clone, PartialEq)]
pub struct FeederStatus {
    pub n_feeders: usize,
    pub n_steps: usize,
    failure_step: Vec<u32>,
}

impl FeederStatus {
    pub const SURVIVED: u32 = u32::MAX;

    pub(crate) fn new(n_feeders: usize, n_steps: usize, failure_step: Vec<u32>) -> Self {
        Self { n_feeders, n_steps, failure_step }
    }

    pub fn failure_step(&self, run: usize, feeder: usize) -> Option<usize> {
        match self.failure_step[run * self.n_feeders + feeder] {
            Self::SURVIVED => None,
            s => Some(s as usize),
        }
    }

    /// s_i(t) = 0 once the feeder has failed.
    pub fn is_failed(&self, run: usize, feeder: usize, step: usize) -> bool {
        self.failure_step(run, feeder).is_some_and(|s| s <= step)
    }

    pub fn failed_set(&self, run: usize, step: usize) -> Vec<usize> {
        (0..self.n_feeders).filter(|&i| self.is_failed(run, i, step)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngTrace {
    pub generator: String,
    pub master_seed: u64,
    /// Run `j` reads stream `first_stream + j`.
    pub first_stream: u64,
    pub n_streams: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutageEnsemble {
    pub method: Method,
    pub total: Trajectories,
    pub regions: BTreeMap<String, Trajectories>,
    pub status: Option<FeederStatus>,
    pub rng_trace: RngTrace,
}

impl OutageEnsemble {
    pub fn timestamps(&self) -> &[Timestamp] {
        self.total.timestamps()
    }

    pub fn n_runs(&self) -> usize {
        self.total.n_runs()
    }

    /// Per-run system outage at the last step, percent.
    pub fn final_p_fail(&self) -> Vec<f64> {
        let last = self.total.n_steps() - 1;
        self.total.column(last)
    }

    pub fn mean_final_p_fail(&self) -> f64 {
        let f = self.final_p_fail();
        f.iter().sum::<f64>() / f.len() as f64
    }
}

use serde::{Deserialize, Serialize};

use crate::engine::Trajectories;
use crate::time::{format_timestamp, Timestamp};

pub const DEFAULT_LEVELS: (f64, f64) = (0.01, 0.99);

/// Ensemble spread at one timestamp.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub timestamp: Timestamp,
    pub mean: f64,
    pub q01: f64,
    pub q99: f64,
}

/// Nearest-rank quantile of sorted data: the element at 0-based index
/// `round_half_even(p · (n − 1))`.
pub fn nearest_rank(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let idx = (p.clamp(0.0, 1.0) * (n - 1) as f64).round_ties_even() as usize;
    sorted[idx.min(n - 1)]
}

/// Mean and lower/upper quantiles per timestamp. The `q01`/`q99` fields
/// carry whatever `levels` were requested.
pub fn quantile_bands(traj: &Trajectories, levels: (f64, f64)) -> Vec<Band> {
    if traj.n_runs() < 100 && (levels.0 <= 0.01 || levels.1 >= 0.99) {
        log::warn!("{} runs are too few to resolve {:?} quantiles", traj.n_runs(), levels);
    }
    let mean = traj.mean();
    let bands: Vec<Band> = traj
        .timestamps()
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let mut col = traj.column(k);
            col.sort_by(f64::total_cmp);
            Band { timestamp: *t, mean: mean[k], q01: nearest_rank(&col, levels.0), q99: nearest_rank(&col, levels.1) }
        })
        .collect();
    // a few far outliers can drag the mean past a quantile
    let outside = bands.iter().filter(|b| b.mean < b.q01 || b.mean > b.q99).count();
    if outside > 0 {
        log::warn!("mean lies outside the {levels:?} band at {outside} of {} timestamps", bands.len());
    }
    bands
}

/// `timestamp,mean,q01,q99` table.
pub fn bands_to_csv(bands: &[Band]) -> String {
    let mut out = String::from("timestamp,mean,q01,q99\n");
    for b in bands {
        out.push_str(&format!("{},{},{},{}\n", format_timestamp(&b.timestamp), b.mean, b.q01, b.q99));
    }
    out
}

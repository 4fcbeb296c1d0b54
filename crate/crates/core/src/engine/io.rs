//! Ensemble files: long-form CSV plus a JSON summary.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::Method;
use super::ensemble::{OutageEnsemble, RngTrace, Trajectories};
use super::EngineError;
use crate::time::{format_timestamp, parse_timestamp};

pub const ENSEMBLE_CSV: &str = "ensemble.csv";
pub const REGIONS_CSV: &str = "ensemble_regions.csv";
pub const SUMMARY_JSON: &str = "summary.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub method: Method,
    pub master_seed: u64,
    pub n_runs: usize,
    pub n_steps: usize,
    pub start: String,
    pub end: String,
    pub regions: Vec<String>,
    pub mean_final_p_fail_pct: f64,
    pub rng_trace: RngTrace,
    /// Echo of the configuration that produced the ensemble.
    #[serde(default)]
    pub config: serde_json::Value,
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> EngineError + '_ {
    move |e| EngineError::Io { path: path.display().to_string(), source: e }
}

/// Writes `ensemble.csv`, `summary.json` and, when `regional`, `ensemble_regions.csv`.
pub fn write_ensemble(
    ensemble: &OutageEnsemble,
    dir: impl AsRef<Path>,
    regional: bool,
    config_echo: serde_json::Value,
) -> Result<EnsembleSummary, EngineError> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let stamps: Vec<String> = ensemble.timestamps().iter().map(format_timestamp).collect();

    let path = dir.join(ENSEMBLE_CSV);
    let mut w = BufWriter::new(File::create(&path).map_err(io_err(&path))?);
    writeln!(w, "run,timestamp,p_fail_pct").map_err(io_err(&path))?;
    for (j, row) in ensemble.total.rows().enumerate() {
        for (ts, v) in stamps.iter().zip(row) {
            writeln!(w, "{j},{ts},{v}").map_err(io_err(&path))?;
        }
    }
    w.flush().map_err(io_err(&path))?;

    if regional {
        let path = dir.join(REGIONS_CSV);
        let mut w = BufWriter::new(File::create(&path).map_err(io_err(&path))?);
        writeln!(w, "run,timestamp,region,p_fail_pct").map_err(io_err(&path))?;
        for j in 0..ensemble.n_runs() {
            for (name, traj) in &ensemble.regions {
                for (ts, v) in stamps.iter().zip(traj.row(j)) {
                    writeln!(w, "{j},{ts},{name},{v}").map_err(io_err(&path))?;
                }
            }
        }
        w.flush().map_err(io_err(&path))?;
    }

    let summary = EnsembleSummary {
        method: ensemble.method,
        master_seed: ensemble.rng_trace.master_seed,
        n_runs: ensemble.n_runs(),
        n_steps: stamps.len(),
        start: stamps[0].clone(),
        end: stamps[stamps.len() - 1].clone(),
        regions: ensemble.regions.keys().cloned().collect(),
        mean_final_p_fail_pct: ensemble.mean_final_p_fail(),
        rng_trace: ensemble.rng_trace.clone(),
        config: config_echo,
    };
    let path = dir.join(SUMMARY_JSON);
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    std::fs::write(&path, json + "\n").map_err(io_err(&path))?;
    Ok(summary)
}

fn read_long_csv(path: &Path, with_region: bool) -> Result<BTreeMap<String, Vec<(usize, String, f64)>>, EngineError> {
    let malformed = |m: String| EngineError::MalformedFile(format!("{}: {m}", path.display()));
    let mut rdr = csv::Reader::from_path(path).map_err(|e| malformed(e.to_string()))?;
    let mut out: BTreeMap<String, Vec<(usize, String, f64)>> = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| malformed(e.to_string()))?;
        let run: usize = rec[0].parse().map_err(|_| malformed(format!("bad run '{}'", &rec[0])))?;
        let (region, value) = if with_region { (rec[2].to_string(), &rec[3]) } else { (String::new(), &rec[2]) };
        let v: f64 = value.parse().map_err(|_| malformed(format!("bad value '{value}'")))?;
        out.entry(region).or_default().push((run, rec[1].to_string(), v));
    }
    Ok(out)
}

fn to_trajectories(
    path: &Path,
    rows: Vec<(usize, String, f64)>,
    stamps: &[String],
    n_runs: usize,
) -> Result<Trajectories, EngineError> {
    let n_steps = stamps.len();
    if rows.len() != n_runs * n_steps {
        return Err(EngineError::MalformedFile(format!(
            "{}: expected {} rows, found {}",
            path.display(),
            n_runs * n_steps,
            rows.len()
        )));
    }
    let mut values = vec![f64::NAN; n_runs * n_steps];
    for (k, (run, ts, v)) in rows.into_iter().enumerate() {
        let step = k % n_steps;
        if run >= n_runs || ts != stamps[step] {
            return Err(EngineError::MalformedFile(format!("{}: row {} out of order", path.display(), k + 2)));
        }
        values[run * n_steps + step] = v;
    }
    let timestamps = stamps
        .iter()
        .map(|s| parse_timestamp(s).ok_or_else(|| EngineError::MalformedFile(format!("bad timestamp '{s}'"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Trajectories::new(timestamps, n_runs, values))
}

/// Reads a directory produced by [`write_ensemble`].
pub fn read_ensemble(dir: impl AsRef<Path>) -> Result<OutageEnsemble, EngineError> {
    let dir = dir.as_ref();
    let spath = dir.join(SUMMARY_JSON);
    let text = std::fs::read_to_string(&spath).map_err(io_err(&spath))?;
    let summary: EnsembleSummary =
        serde_json::from_str(&text).map_err(|e| EngineError::MalformedFile(format!("{}: {e}", spath.display())))?;

    let tpath = dir.join(ENSEMBLE_CSV);
    let rows = read_long_csv(&tpath, false)?.remove("").unwrap_or_default();
    let stamps: Vec<String> = rows.iter().take(summary.n_steps).map(|r| r.1.clone()).collect();
    if stamps.len() != summary.n_steps {
        return Err(EngineError::MalformedFile(format!("{}: too few rows", tpath.display())));
    }
    let total = to_trajectories(&tpath, rows, &stamps, summary.n_runs)?;

    let rpath = dir.join(REGIONS_CSV);
    let mut regions = BTreeMap::new();
    if rpath.exists() {
        for (name, rows) in read_long_csv(&rpath, true)? {
            regions.insert(name, to_trajectories(&rpath, rows, &stamps, summary.n_runs)?);
        }
    }
    Ok(OutageEnsemble { method: summary.method, total, regions, status: None, rng_trace: summary.rng_trace })
}

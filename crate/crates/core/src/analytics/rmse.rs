use super::observed::ObservedOutageSeries;
use super::AnalyticsError;
use crate::engine::Trajectories;

/// Per-run RMSE between the observed record and each simulated trajectory,
/// in percentage points.
pub fn rmse_per_run(observed: &ObservedOutageSeries, sim: &Trajectories) -> Result<Vec<f64>, AnalyticsError> {
    let obs = observed.resample_to(sim.timestamps())?;
    let n_steps = obs.len() as f64;
    Ok(sim
        .rows()
        .map(|row| {
            let sse: f64 = obs.iter().zip(row).map(|(o, p)| (o - p) * (o - p)).sum();
            (sse / n_steps).sqrt()
        })
        .collect())
}

/// Average over runs of the per-run RMSE against the observed series.
pub fn avg_rmse(observed: &ObservedOutageSeries, sim: &Trajectories) -> Result<f64, AnalyticsError> {
    let per_run = rmse_per_run(observed, sim)?;
    Ok(per_run.iter().sum::<f64>() / per_run.len() as f64)
}

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::bands::{quantile_bands, Band};
use super::observed::{ObservedOutageSeries, TOTAL};
use super::rmse::avg_rmse;
use super::sweep::ResolutionTable;
use super::AnalyticsError;
use crate::engine::{Method, OutageEnsemble};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    /// Absent when no observed series exists for the region.
    pub avg_rmse: Option<f64>,
    pub quantile_bands: Vec<Band>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub method: Method,
    pub n_runs: usize,
    pub avg_rmse: f64,
    pub quantile_bands: Vec<Band>,
    pub per_region: BTreeMap<String, RegionReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution_table: Option<ResolutionTable>,
}

impl ComparisonReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Scores an ensemble against the observed `"total"` series and every
/// observed region the ensemble also covers.
pub fn compare(
    ensemble: &OutageEnsemble,
    observed: &BTreeMap<String, ObservedOutageSeries>,
    levels: (f64, f64),
) -> Result<ComparisonReport, AnalyticsError> {
    let total = observed.get(TOTAL).ok_or_else(|| AnalyticsError::InvalidObserved {
        region: TOTAL.into(),
        reason: "no system-wide series in the observed file".into(),
    })?;
    let per_region = ensemble
        .regions
        .iter()
        .map(|(name, traj)| {
            let rmse = observed.get(name).map(|o| avg_rmse(o, traj)).transpose()?;
            Ok((name.clone(), RegionReport { avg_rmse: rmse, quantile_bands: quantile_bands(traj, levels) }))
        })
        .collect::<Result<_, AnalyticsError>>()?;
    Ok(ComparisonReport {
        method: ensemble.method,
        n_runs: ensemble.n_runs(),
        avg_rmse: avg_rmse(total, &ensemble.total)?,
        quantile_bands: quantile_bands(&ensemble.total, levels),
        per_region,
        resolution_table: None,
    })
}

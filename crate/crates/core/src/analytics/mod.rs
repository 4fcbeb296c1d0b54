//! Ensemble-versus-observation comparison and fragility calibration.

pub mod bands;
pub mod calibrate;
pub mod observed;
pub mod report;
pub mod rmse;
pub mod sweep;

pub use bands::{bands_to_csv, nearest_rank, quantile_bands, Band, DEFAULT_LEVELS};
pub use calibrate::{calibrate_fragility, calibration_points, Calibration, FRACTION_CLAMP, MIN_BETA};
pub use observed::{observed_to_csv, parse_observed, parse_observed_reader, ObservedOutageSeries, TOTAL};
pub use report::{compare, ComparisonReport, RegionReport};
pub use rmse::{avg_rmse, rmse_per_run};
pub use sweep::{resolution_sweep, ResolutionTable, SweepEntry, SweepScenario};

use crate::engine::EngineError;
use crate::network::NetworkError;
use crate::wind::WindError;

#[derive(Debug, thiserror::Error)]
pub enum AnalyticsError {
    #[error("timestamp mismatch: {0}")]
    TimestampMismatch(String),
    #[error("calibration needs at least 3 points, got {0}")]
    InsufficientPoints(usize),
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("observed series '{region}': {reason}")]
    InvalidObserved { region: String, reason: String },
    #[error("malformed observed row at line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("optimizer failed: {0}")]
    Optimizer(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Wind(#[from] WindError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

//! Storm tracks and the spatiotemporal wind fields they drive.

pub mod field;
pub mod io;
pub mod profile;
pub mod track;

pub use field::{
    generate_wind_fields, generate_wind_fields_with, BBox, RasterGrid, WindFieldSeries, WindFieldSpec, DEFAULT_CELL_SIZE_DEG,
    DEFAULT_DT_S, DEFAULT_GUST_FACTOR,
};
pub use io::{export_wind_fields, import_wind_fields, WindFieldManifest};
pub use profile::{sustained_wind_at, sustained_wind_with, HollandProfile, RadialProfile, StormState, WindProfileParams};
pub use track::{parse_track, parse_track_reader, write_track, TcTrack, TcTrackPoint};

#[derive(Debug, thiserror::Error)]
pub enum WindError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed track row at line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("timestamps not strictly increasing at line {line}")]
    NonMonotonicTime { line: usize },
    #[error("track has no rows")]
    EmptyTrack,
    #[error("track needs at least 2 points, found {0}")]
    TooFewPoints(usize),
    #[error("track point {index}: {reason}")]
    InvalidPoint { index: usize, reason: String },
    #[error("time step must be positive, got {0} s")]
    NonPositiveDt(i64),
    #[error("window {start}..{end} not covered by the track")]
    WindowOutsideTrack { start: String, end: String },
    #[error("degenerate bounding box {0}")]
    DegenerateBBox(String),
    #[error("cell size must be positive, got {0}")]
    NonPositiveCellSize(f64),
    #[error("inconsistent wind raster: {0}")]
    InconsistentRaster(String),
    #[error("invalid wind parameters: {0}")]
    InvalidParams(String),
    #[error("query outside wind field: {0}")]
    OutOfBounds(String),
    #[error("malformed wind field file: {0}")]
    MalformedFile(String),
}

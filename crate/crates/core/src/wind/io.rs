//! Wind-field export: one CSV per step plus a JSON manifest.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::field::{RasterGrid, WindFieldSeries};
use super::WindError;
use crate::time::{format_timestamp, parse_timestamp};

pub const MANIFEST_FILE: &str = "windfield.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindFieldManifest {
    pub bbox: super::field::BBox,
    pub cell_size: f64,
    pub nrows: usize,
    pub ncols: usize,
    pub gust_factor: f64,
    pub timestamps: Vec<String>,
    pub files: Vec<String>,
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> WindError + '_ {
    move |e| WindError::Io { path: path.display().to_string(), source: e }
}

fn step_file(k: usize) -> String {
    format!("step_{k:04}.csv")
}

/// Writes `step_NNNN.csv` (`lat,lon,sustained_ms,gust_ms`) per step and
/// the manifest into `dir`.
pub fn export_wind_fields(series: &WindFieldSeries, dir: impl AsRef<Path>) -> Result<WindFieldManifest, WindError> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let grid = *series.grid();
    let mut files = Vec::with_capacity(series.len());
    for k in 0..series.len() {
        let name = step_file(k);
        let path = dir.join(&name);
        let mut out = String::with_capacity(grid.len() * 48);
        out.push_str("lat,lon,sustained_ms,gust_ms\n");
        let raster = series.sustained_raster(k);
        for row in 0..grid.nrows {
            for col in 0..grid.ncols {
                let c = grid.cell_center(row, col);
                let s = raster[row * grid.ncols + col];
                out.push_str(&format!("{},{},{},{}\n", c.lat, c.lon, s, series.gust_factor() * s));
            }
        }
        fs::write(&path, out).map_err(io_err(&path))?;
        files.push(name);
    }
    let manifest = WindFieldManifest {
        bbox: grid.bbox,
        cell_size: grid.cell_size,
        nrows: grid.nrows,
        ncols: grid.ncols,
        gust_factor: series.gust_factor(),
        timestamps: series.timestamps().iter().map(format_timestamp).collect(),
        files,
    };
    let path = dir.join(MANIFEST_FILE);
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, json + "\n").map_err(io_err(&path))?;
    Ok(manifest)
}

/// Reads back a directory written by [`export_wind_fields`].
pub fn import_wind_fields(dir: impl AsRef<Path>) -> Result<WindFieldSeries, WindError> {
    let dir = dir.as_ref();
    let mpath = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&mpath).map_err(io_err(&mpath))?;
    let m: WindFieldManifest = serde_json::from_str(&text)
        .map_err(|e| WindError::MalformedFile(format!("{}: {e}", mpath.display())))?;
    let grid = RasterGrid::new(m.bbox, m.cell_size)?;
    if (grid.nrows, grid.ncols) != (m.nrows, m.ncols) || m.files.len() != m.timestamps.len() {
        return Err(WindError::MalformedFile(format!("{}: inconsistent dimensions", mpath.display())));
    }
    let timestamps = m
        .timestamps
        .iter()
        .map(|s| parse_timestamp(s).ok_or_else(|| WindError::MalformedFile(format!("bad timestamp '{s}'"))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rasters = Vec::with_capacity(m.files.len());
    for name in &m.files {
        let path = dir.join(name);
        let mut rdr = csv::Reader::from_path(&path)
            .map_err(|e| WindError::MalformedFile(format!("{}: {e}", path.display())))?;
        let mut raster = Vec::with_capacity(grid.len());
        for rec in rdr.records() {
            let rec = rec.map_err(|e| WindError::MalformedFile(format!("{}: {e}", path.display())))?;
            let v = rec
                .get(2)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| WindError::MalformedFile(format!("{}: bad sustained value", path.display())))?;
            raster.push(v);
        }
        rasters.push(raster);
    }
    WindFieldSeries::new(grid, timestamps, rasters, m.gust_factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wind::field::BBox;

    #[test]
    fn export_import_preserves_values_exactly() {
        let grid = RasterGrid::new(BBox::new(18.0, 18.15, -66.0, -65.9).unwrap(), 0.05).unwrap();
        let t0 = parse_timestamp("2022-09-18T00:00:00Z").unwrap();
        let t1 = parse_timestamp("2022-09-18T00:10:00Z").unwrap();
        let a: Vec<f64> = (0..grid.len()).map(|k| (k as f64).sqrt() * 3.3).collect();
        let b: Vec<f64> = (0..grid.len()).map(|k| 1.0 / (k as f64 + 7.0)).collect();
        let s = WindFieldSeries::new(grid, vec![t0, t1], vec![a, b], 1.49).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let m = export_wind_fields(&s, dir.path()).unwrap();
        assert_eq!(m.files.len(), 2);
        let back = import_wind_fields(dir.path()).unwrap();
        assert_eq!(back, s);
    }
}

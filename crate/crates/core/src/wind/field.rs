//! Gridded sustained/gust wind fields over a lat/lon box.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::profile::{sustained_wind_with, RadialProfile, StormState, WindProfileParams};
use super::track::TcTrack;
use super::WindError;
use crate::geo::LatLon;
use crate::time::{format_timestamp, Timestamp};

/// 3-second gust factor for 1-minute sustained wind.
pub const DEFAULT_GUST_FACTOR: f64 = 1.49;
pub const DEFAULT_CELL_SIZE_DEG: f64 = 0.05;
pub const DEFAULT_DT_S: i64 = 600;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub lat_min: f64,
    pub lat_max: f64,
    pub lon_min: f64,
    pub lon_max: f64,
}

impl BBox {
    pub fn new(lat_min: f64, lat_max: f64, lon_min: f64, lon_max: f64) -> Result<Self, WindError> {
        let b = Self { lat_min, lat_max, lon_min, lon_max };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<(), WindError> {
        let ok = [self.lat_min, self.lat_max, self.lon_min, self.lon_max].iter().all(|v| v.is_finite())
            && self.lat_min < self.lat_max
            && self.lon_min < self.lon_max
            && LatLon::new(self.lat_min, self.lon_min).is_valid()
            && LatLon::new(self.lat_max, self.lon_max).is_valid();
        if ok {
            Ok(())
        } else {
            Err(WindError::DegenerateBBox(format!("{self:?}")))
        }
    }

    pub fn contains(&self, p: LatLon) -> bool {
        (self.lat_min..=self.lat_max).contains(&p.lat) && (self.lon_min..=self.lon_max).contains(&p.lon)
    }
}

impl std::str::FromStr for BBox {
    type Err = WindError;

    /// `lat_min,lat_max,lon_min,lon_max`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v: Vec<f64> = s
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| WindError::DegenerateBBox(s.to_string()))?;
        match v.as_slice() {
            [a, b, c, d] => BBox::new(*a, *b, *c, *d),
            _ => Err(WindError::DegenerateBBox(s.to_string())),
        }
    }
}

/// Cell layout: rows run south→north, columns west→east, values row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RasterGrid {
    pub bbox: BBox,
    pub cell_size: f64,
    pub nrows: usize,
    pub ncols: usize,
}

impl RasterGrid {
    pub fn new(bbox: BBox, cell_size: f64) -> Result<Self, WindError> {
        bbox.validate()?;
        if !(cell_size.is_finite() && cell_size > 0.0) {
            return Err(WindError::NonPositiveCellSize(cell_size));
        }
        let cells = |span: f64| ((span / cell_size - 1e-9).ceil() as usize).max(1);
        Ok(Self {
            bbox,
            cell_size,
            nrows: cells(bbox.lat_max - bbox.lat_min),
            ncols: cells(bbox.lon_max - bbox.lon_min),
        })
    }

    pub fn len(&self) -> usize {
        self.nrows * self.ncols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_center(&self, row: usize, col: usize) -> LatLon {
        LatLon::new(
            self.bbox.lat_min + (row as f64 + 0.5) * self.cell_size,
            self.bbox.lon_min + (col as f64 + 0.5) * self.cell_size,
        )
    }

    /// Bilinear interpolation between cell centres, clamped to the edge
    /// centres in the outer half-cell.
    pub fn bilinear(&self, values: &[f64], p: LatLon) -> f64 {
        let axis = |coord: f64, origin: f64, n: usize| -> (usize, usize, f64) {
            let mut f = ((coord - origin) / self.cell_size - 0.5).clamp(0.0, (n - 1) as f64);
            // cell centres reproduce the stored value exactly
            if (f - f.round()).abs() < 1e-9 {
                f = f.round();
            }
            let i0 = f.floor() as usize;
            let i1 = (i0 + 1).min(n - 1);
            (i0, i1, f - i0 as f64)
        };
        let (r0, r1, wy) = axis(p.lat, self.bbox.lat_min, self.nrows);
        let (c0, c1, wx) = axis(p.lon, self.bbox.lon_min, self.ncols);
        let at = |r: usize, c: usize| values[r * self.ncols + c];
        let south = at(r0, c0) * (1.0 - wx) + at(r0, c1) * wx;
        let north = at(r1, c0) * (1.0 - wx) + at(r1, c1) * wx;
        south * (1.0 - wy) + north * wy
    }
}

/// Time stack of sustained-wind rasters; gust values are derived on demand
/// as `gust_factor × sustained`.
#[derive(Debug, Clone, PartialEq)]
pub struct WindFieldSeries {
    grid: RasterGrid,
    timestamps: Vec<Timestamp>,
    sustained: Vec<Vec<f64>>,
    gust_factor: f64,
}

impl WindFieldSeries {
    pub fn new(
        grid: RasterGrid,
        timestamps: Vec<Timestamp>,
        sustained: Vec<Vec<f64>>,
        gust_factor: f64,
    ) -> Result<Self, WindError> {
        if timestamps.is_empty() || timestamps.len() != sustained.len() {
            return Err(WindError::InconsistentRaster(format!(
                "{} timestamps for {} rasters",
                timestamps.len(),
                sustained.len()
            )));
        }
        if timestamps.windows(2).any(|w| w[1] <= w[0]) {
            return Err(WindError::InconsistentRaster("timestamps not strictly increasing".into()));
        }
        for (k, r) in sustained.iter().enumerate() {
            if r.len() != grid.len() {
                return Err(WindError::InconsistentRaster(format!(
                    "raster {k} has {} cells, grid has {}",
                    r.len(),
                    grid.len()
                )));
            }
            if let Some(v) = r.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                return Err(WindError::InconsistentRaster(format!("raster {k} holds invalid value {v}")));
            }
        }
        if !(gust_factor.is_finite() && gust_factor > 0.0) {
            return Err(WindError::InvalidParams(format!("gust factor {gust_factor} must be > 0")));
        }
        Ok(Self { grid, timestamps, sustained, gust_factor })
    }

    /// Series with the same raster at every timestamp.
    pub fn uniform(grid: RasterGrid, timestamps: Vec<Timestamp>, sustained_ms: f64) -> Result<Self, WindError> {
        let rasters = vec![vec![sustained_ms; grid.len()]; timestamps.len()];
        Self::new(grid, timestamps, rasters, DEFAULT_GUST_FACTOR)
    }

    pub fn with_gust_factor(mut self, gust_factor: f64) -> Result<Self, WindError> {
        if !(gust_factor.is_finite() && gust_factor > 0.0) {
            return Err(WindError::InvalidParams(format!("gust factor {gust_factor} must be > 0")));
        }
        self.gust_factor = gust_factor;
        Ok(self)
    }

    pub fn grid(&self) -> &RasterGrid {
        &self.grid
    }

    pub fn bbox(&self) -> &BBox {
        &self.grid.bbox
    }

    pub fn timestamps(&self) -> &[Timestamp] {
        &self.timestamps
    }

    pub fn gust_factor(&self) -> f64 {
        self.gust_factor
    }

    pub fn sustained_raster(&self, step: usize) -> &[f64] {
        &self.sustained[step]
    }

    pub fn gust_raster(&self, step: usize) -> Vec<f64> {
        self.sustained[step].iter().map(|v| self.gust_factor * v).collect()
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    /// Index of the last step at or before `t`.
    pub fn step_at(&self, t: Timestamp) -> Result<usize, WindError> {
        let last = self.timestamps[self.timestamps.len() - 1];
        if t < self.timestamps[0] || t > last {
            return Err(WindError::OutOfBounds(format!("time {}", format_timestamp(&t))));
        }
        Ok(self.timestamps.partition_point(|s| *s <= t) - 1)
    }

    /// Bilinear sustained wind at `point` on raster `step`.
    pub fn sustained_at_step(&self, point: LatLon, step: usize) -> Result<f64, WindError> {
        if !self.grid.bbox.contains(point) {
            return Err(WindError::OutOfBounds(format!("point ({}, {})", point.lat, point.lon)));
        }
        Ok(self.grid.bilinear(&self.sustained[step], point))
    }

    pub fn sustained_at(&self, point: LatLon, t: Timestamp) -> Result<f64, WindError> {
        self.sustained_at_step(point, self.step_at(t)?)
    }

    /// 3-second gust at `point`, step-and-hold in time.
    pub fn gust_at(&self, point: LatLon, t: Timestamp) -> Result<f64, WindError> {
        Ok(self.gust_factor * self.sustained_at(point, t)?)
    }

    pub fn gust_at_step(&self, point: LatLon, step: usize) -> Result<f64, WindError> {
        Ok(self.gust_factor * self.sustained_at_step(point, step)?)
    }
}

/// Builds the wind field for every interpolated time step of `track`.
pub fn generate_wind_fields(
    track: &TcTrack,
    bbox: BBox,
    cell_size: f64,
    dt_s: i64,
    params: &WindProfileParams,
) -> Result<WindFieldSeries, WindError> {
    let profile = params.holland();
    generate_wind_fields_with(&profile, track, bbox, cell_size, dt_s, params)
}

pub fn generate_wind_fields_with(
    profile: &dyn RadialProfile,
    track: &TcTrack,
    bbox: BBox,
    cell_size: f64,
    dt_s: i64,
    params: &WindProfileParams,
) -> Result<WindFieldSeries, WindError> {
    params.validate()?;
    let grid = RasterGrid::new(bbox, cell_size)?;
    let fine = track.interpolate(dt_s)?;
    let velocities = fine.translation_velocities();
    let rasters: Vec<Vec<f64>> = fine
        .points()
        .par_iter()
        .zip(velocities.par_iter())
        .map(|(p, v)| {
            let storm = StormState { center: p.position(), vmax: p.vmax, rmax_km: p.rmax_km, translation: *v };
            let mut raster = Vec::with_capacity(grid.len());
            for row in 0..grid.nrows {
                for col in 0..grid.ncols {
                    raster.push(sustained_wind_with(profile, grid.cell_center(row, col), &storm, params));
                }
            }
            raster
        })
        .collect();
    let timestamps = fine.points().iter().map(|p| p.timestamp).collect();
    WindFieldSeries::new(grid, timestamps, rasters, DEFAULT_GUST_FACTOR)
}

/// Everything needed to turn a track into a wind field, bundled for configs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindFieldSpec {
    pub bbox: BBox,
    #[serde(default = "default_cell_size")]
    pub cell_size: f64,
    #[serde(default)]
    pub profile: WindProfileParams,
    #[serde(default = "default_gust_factor")]
    pub gust_factor: f64,
}

fn default_cell_size() -> f64 {
    DEFAULT_CELL_SIZE_DEG
}

fn default_gust_factor() -> f64 {
    DEFAULT_GUST_FACTOR
}

impl WindFieldSpec {
    pub fn new(bbox: BBox) -> Self {
        Self { bbox, cell_size: DEFAULT_CELL_SIZE_DEG, profile: WindProfileParams::default(), gust_factor: DEFAULT_GUST_FACTOR }
    }

    pub fn generate(&self, track: &TcTrack, dt_s: i64) -> Result<WindFieldSeries, WindError> {
        generate_wind_fields(track, self.bbox, self.cell_size, dt_s, &self.profile)?.with_gust_factor(self.gust_factor)
    }

    /// Field on the grid `start, start+dt, …, end`, from the track clipped to that window.
    pub fn generate_window(
        &self,
        track: &TcTrack,
        start: Timestamp,
        end: Timestamp,
        dt_s: i64,
    ) -> Result<WindFieldSeries, WindError> {
        self.generate(&track.window(start, end)?, dt_s)
    }
}

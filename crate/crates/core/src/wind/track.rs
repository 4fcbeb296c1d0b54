//! Tropical-cyclone best-track ingest and time interpolation.

use std::path::Path;

use chrono::Duration;

use super::WindError;
use crate::geo::{haversine_km, initial_bearing, LatLon};
use crate::time::{format_timestamp, parse_timestamp, Timestamp};

/// Header the track CSV must carry, in this order.
pub const TRACK_HEADER: [&str; 5] = ["timestamp_iso8601", "lat_deg", "lon_deg", "vmax_ms", "rmax_km"];

/// One best-track fix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TcTrackPoint {
    pub timestamp: Timestamp,
    pub lat: f64,
    pub lon: f64,
    /// Maximum sustained wind, m/s.
    pub vmax: f64,
    /// Radius of maximum wind, km.
    pub rmax_km: f64,
}

impl TcTrackPoint {
    pub fn position(&self) -> LatLon {
        LatLon::new(self.lat, self.lon)
    }

    fn check(&self) -> Result<(), String> {
        if !self.position().is_valid() {
            return Err(format!("position ({}, {}) out of range", self.lat, self.lon));
        }
        if !(self.vmax.is_finite() && self.vmax >= 0.0) {
            return Err(format!("vmax {} must be finite and >= 0", self.vmax));
        }
        if !(self.rmax_km.is_finite() && self.rmax_km > 0.0) {
            return Err(format!("rmax {} must be finite and > 0", self.rmax_km));
        }
        Ok(())
    }
}

/// Time-ordered storm track with at least two fixes.
#[derive(Debug, Clone, PartialEq)]
pub struct TcTrack {
    points: Vec<TcTrackPoint>,
}

impl TcTrack {
    pub fn new(points: Vec<TcTrackPoint>) -> Result<Self, WindError> {
        if points.is_empty() {
            return Err(WindError::EmptyTrack);
        }
        if points.len() < 2 {
            return Err(WindError::TooFewPoints(points.len()));
        }
        for (k, p) in points.iter().enumerate() {
            p.check().map_err(|reason| WindError::InvalidPoint { index: k, reason })?;
        }
        if let Some(k) = points.windows(2).position(|w| w[1].timestamp <= w[0].timestamp) {
            return Err(WindError::NonMonotonicTime { line: k + 1 });
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[TcTrackPoint] {
        &self.points
    }

    pub fn start(&self) -> Timestamp {
        self.points[0].timestamp
    }

    pub fn end(&self) -> Timestamp {
        self.points[self.points.len() - 1].timestamp
    }

    pub fn duration(&self) -> Duration {
        self.end() - self.start()
    }

    pub fn max_vmax(&self) -> f64 {
        self.points.iter().map(|p| p.vmax).fold(0.0, f64::max)
    }

    /// Linearly interpolated fix at `t`; exact copy when `t` hits an original fix.
    pub fn point_at(&self, t: Timestamp) -> Option<TcTrackPoint> {
        if t < self.start() || t > self.end() {
            return None;
        }
        let k = self.points.partition_point(|p| p.timestamp <= t);
        let a = self.points[k - 1];
        if a.timestamp == t || k == self.points.len() {
            return Some(a);
        }
        let b = self.points[k];
        let frac = (t - a.timestamp).num_milliseconds() as f64
            / (b.timestamp - a.timestamp).num_milliseconds() as f64;
        let lerp = |x: f64, y: f64| x + (y - x) * frac;
        Some(TcTrackPoint {
            timestamp: t,
            lat: lerp(a.lat, b.lat),
            lon: lerp(a.lon, b.lon),
            vmax: lerp(a.vmax, b.vmax),
            rmax_km: lerp(a.rmax_km, b.rmax_km),
        })
    }

    /// Resamples the track on `start, start+dt, …`, appending the final fix
    /// when it is off the grid.
    pub fn interpolate(&self, dt_s: i64) -> Result<TcTrack, WindError> {
        if dt_s <= 0 {
            return Err(WindError::NonPositiveDt(dt_s));
        }
        let start = self.start();
        let end = self.end();
        let mut out = Vec::new();
        let mut t = start;
        while t <= end {
            out.push(self.point_at(t).expect("grid time inside track"));
            t += Duration::seconds(dt_s);
        }
        if out.last().map(|p| p.timestamp) != Some(end) {
            out.push(self.points[self.points.len() - 1]);
        }
        TcTrack::new(out)
    }

    /// Sub-track covering exactly `[start, end]`, with interpolated endpoints.
    pub fn window(&self, start: Timestamp, end: Timestamp) -> Result<TcTrack, WindError> {
        if start >= end || start < self.start() || end > self.end() {
            return Err(WindError::WindowOutsideTrack {
                start: format_timestamp(&start),
                end: format_timestamp(&end),
            });
        }
        let mut pts = vec![self.point_at(start).expect("checked")];
        pts.extend(self.points.iter().filter(|p| p.timestamp > start && p.timestamp < end).copied());
        pts.push(self.point_at(end).expect("checked"));
        TcTrack::new(pts)
    }

    /// Storm translation velocity (east, north) in m/s at every fix.
    ///
    /// Central differences in the interior, one-sided at the ends, measured
    /// along the great circle between the neighbouring fixes.
    pub fn translation_velocities(&self) -> Vec<(f64, f64)> {
        let n = self.points.len();
        (0..n)
            .map(|k| {
                let a = self.points[k.saturating_sub(1)];
                let b = self.points[(k + 1).min(n - 1)];
                let secs = (b.timestamp - a.timestamp).num_milliseconds() as f64 / 1000.0;
                if secs <= 0.0 || a.position() == b.position() {
                    return (0.0, 0.0);
                }
                let speed = haversine_km(a.position(), b.position()) * 1000.0 / secs;
                let bearing = initial_bearing(a.position(), b.position());
                (speed * bearing.sin(), speed * bearing.cos())
            })
            .collect()
    }
}

/// Reads a track CSV with header `timestamp_iso8601,lat_deg,lon_deg,vmax_ms,rmax_km`.
pub fn parse_track(path: impl AsRef<Path>) -> Result<TcTrack, WindError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| WindError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_track_reader(file)
}

pub fn parse_track_reader<R: std::io::Read>(reader: R) -> Result<TcTrack, WindError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let header = rdr
        .headers()
        .map_err(|e| WindError::MalformedRow { line: 1, reason: e.to_string() })?
        .clone();
    if header.iter().collect::<Vec<_>>() != TRACK_HEADER {
        return Err(WindError::MalformedRow {
            line: 1,
            reason: format!("expected header {}", TRACK_HEADER.join(",")),
        });
    }
    let mut points: Vec<TcTrackPoint> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| WindError::MalformedRow {
            line: e.position().map(|p| p.line() as usize).unwrap_or(0),
            reason: e.to_string(),
        })?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        if rec.len() != TRACK_HEADER.len() {
            return Err(WindError::MalformedRow {
                line,
                reason: format!("expected {} fields, found {}", TRACK_HEADER.len(), rec.len()),
            });
        }
        let malformed = |reason: String| WindError::MalformedRow { line, reason };
        let timestamp = parse_timestamp(&rec[0])
            .ok_or_else(|| malformed(format!("bad timestamp '{}'", &rec[0])))?;
        let num = |k: usize| -> Result<f64, WindError> {
            let field = &rec[k];
            if field.is_empty() {
                return Err(malformed(format!("missing {}", TRACK_HEADER[k])));
            }
            field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| malformed(format!("bad {} '{}'", TRACK_HEADER[k], field)))
        };
        let point = TcTrackPoint {
            timestamp,
            lat: num(1)?,
            lon: num(2)?,
            vmax: num(3)?,
            rmax_km: num(4)?,
        };
        point.check().map_err(malformed)?;
        if let Some(prev) = points.last() {
            if point.timestamp <= prev.timestamp {
                return Err(WindError::NonMonotonicTime { line });
            }
        }
        points.push(point);
    }
    if points.is_empty() {
        return Err(WindError::EmptyTrack);
    }
    TcTrack::new(points)
}

/// Writes a track in the same CSV schema `parse_track` reads.
pub fn write_track(track: &TcTrack, path: impl AsRef<Path>) -> Result<(), WindError> {
    let path = path.as_ref();
    let io_err = |e: std::io::Error| WindError::Io { path: path.display().to_string(), source: e };
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(e.into()))?;
    w.write_record(TRACK_HEADER).map_err(|e| io_err(e.into()))?;
    for p in track.points() {
        w.write_record([
            format_timestamp(&p.timestamp),
            p.lat.to_string(),
            p.lon.to_string(),
            p.vmax.to_string(),
            p.rmax_km.to_string(),
        ])
        .map_err(|e| io_err(e.into()))?;
    }
    w.flush().map_err(io_err)
}

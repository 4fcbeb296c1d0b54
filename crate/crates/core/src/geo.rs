//! Spherical-earth geometry helpers.

use serde::{Deserialize, Serialize};

/// Mean earth radius used for all great-circle computations.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Geographic point in decimal degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatLon {
    pub lat: f64,
    pub lon: f64,
}

impl LatLon {
    pub fn new(lat: f64, lon: f64) -> Self {
        Self { lat, lon }
    }

    pub fn is_valid(&self) -> bool {
        self.lat.is_finite()
            && self.lon.is_finite()
            && (-90.0..=90.0).contains(&self.lat)
            && (-180.0..=180.0).contains(&self.lon)
    }
}

/// Haversine great-circle distance in kilometres.
pub fn haversine_km(a: LatLon, b: LatLon) -> f64 {
    let (lat1, lat2) = (a.lat.to_radians(), b.lat.to_radians());
    let dlat = lat2 - lat1;
    let dlon = (b.lon - a.lon).to_radians();
    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
}

/// Initial bearing from `a` to `b`, radians clockwise from north.
pub fn initial_bearing(a: LatLon, b: LatLon) -> f64 {
    let (lat1, lat2) = (a.lat.to_radians(), b.lat.to_radians());
    let dlon = (b.lon - a.lon).to_radians();
    let y = dlon.sin() * lat2.cos();
    let x = lat1.cos() * lat2.sin() - lat1.sin() * lat2.cos() * dlon.cos();
    y.atan2(x)
}

/// Local (east, north) unit vector pointing from `from` towards `to`.
///
/// Returns `None` when the points coincide.
pub fn unit_towards(from: LatLon, to: LatLon) -> Option<(f64, f64)> {
    if from == to {
        return None;
    }
    let bearing = initial_bearing(from, to);
    Some((bearing.sin(), bearing.cos()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_degree_of_latitude() {
        let d = haversine_km(LatLon::new(0.0, 0.0), LatLon::new(1.0, 0.0));
        let expected = EARTH_RADIUS_KM * std::f64::consts::PI / 180.0;
        assert!((d - expected).abs() < 1e-9);
    }

    #[test]
    fn bearings_of_cardinal_directions() {
        let o = LatLon::new(18.0, -66.0);
        let north = initial_bearing(o, LatLon::new(18.5, -66.0));
        let east = initial_bearing(o, LatLon::new(18.0, -65.5));
        assert!(north.abs() < 1e-12);
        assert!((east - std::f64::consts::FRAC_PI_2).abs() < 0.01);
        assert!(unit_towards(o, o).is_none());
    }
}

//! Parametric radial wind profile plus translation-driven asymmetry.
//!
//! The rotational component follows a simplified Holland form
//!
//! ```text
//! v(r) = vmax · sqrt( (rmax/r)^B · exp(1 − (rmax/r)^B) )
//! ```
//!
//! which peaks at exactly `vmax` when `r = rmax`. Flow is counterclockwise in
//! the northern hemisphere. A background wind equal to `asym_alpha` times the
//! storm translation vector, rotated by `asym_theta` towards the cyclonic
//! side, is added vectorially.

use serde::{Deserialize, Serialize};

use super::WindError;
use crate::geo::{haversine_km, unit_towards, LatLon};

/// Radial profile of the rotational wind speed.
pub trait RadialProfile: Send + Sync {
    /// Rotational wind speed (m/s) at distance `r_km` from the centre.
    fn speed(&self, vmax: f64, rmax_km: f64, r_km: f64) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HollandProfile {
    pub shape_b: f64,
}

impl RadialProfile for HollandProfile {
    fn speed(&self, vmax: f64, rmax_km: f64, r_km: f64) -> f64 {
        if r_km <= 0.0 {
            return 0.0;
        }
        let x = (rmax_km / r_km).powf(self.shape_b);
        vmax * (x * (1.0 - x).exp()).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WindProfileParams {
    /// Holland-type shape exponent B.
    pub shape_b: f64,
    /// Weight of the translation vector in the background wind.
    pub asym_alpha: f64,
    /// Rotation of the translation vector, degrees (cyclonic sense).
    pub asym_theta: f64,
}

impl Default for WindProfileParams {
    fn default() -> Self {
        Self { shape_b: 1.3, asym_alpha: 0.55, asym_theta: 20.0 }
    }
}

impl WindProfileParams {
    pub fn validate(&self) -> Result<(), WindError> {
        if !(self.shape_b.is_finite() && self.shape_b > 0.0) {
            return Err(WindError::InvalidParams(format!("shape_b {} must be > 0", self.shape_b)));
        }
        if !(0.0..=1.0).contains(&self.asym_alpha) {
            return Err(WindError::InvalidParams(format!(
                "asym_alpha {} must lie in [0, 1]",
                self.asym_alpha
            )));
        }
        if !self.asym_theta.is_finite() {
            return Err(WindError::InvalidParams("asym_theta must be finite".into()));
        }
        Ok(())
    }

    pub fn holland(&self) -> HollandProfile {
        HollandProfile { shape_b: self.shape_b }
    }
}

/// Storm state at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StormState {
    pub center: LatLon,
    pub vmax: f64,
    pub rmax_km: f64,
    /// Translation velocity (east, north), m/s.
    pub translation: (f64, f64),
}

/// Sustained (1-minute) wind speed at `point` using the default Holland profile.
pub fn sustained_wind_at(point: LatLon, storm: &StormState, params: &WindProfileParams) -> f64 {
    sustained_wind_with(&params.holland(), point, storm, params)
}

/// Same as [`sustained_wind_at`] with a caller-supplied radial profile.
pub fn sustained_wind_with(
    profile: &dyn RadialProfile,
    point: LatLon,
    storm: &StormState,
    params: &WindProfileParams,
) -> f64 {
    // +1 counterclockwise (northern hemisphere), -1 clockwise
    let sense = if storm.center.lat >= 0.0 { 1.0 } else { -1.0 };

    let (mut ve, mut vn) = (0.0, 0.0);
    if let Some((re, rn)) = unit_towards(storm.center, point) {
        let r = haversine_km(storm.center, point);
        let v = profile.speed(storm.vmax, storm.rmax_km, r);
        // radial unit vector rotated 90° in the cyclonic sense
        ve = -sense * rn * v;
        vn = sense * re * v;
    }

    let theta = sense * params.asym_theta.to_radians();
    let (te, tn) = storm.translation;
    let (s, c) = theta.sin_cos();
    ve += params.asym_alpha * (te * c - tn * s);
    vn += params.asym_alpha * (te * s + tn * c);

    ve.hypot(vn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::EARTH_RADIUS_KM;

    fn still_storm(vmax: f64, rmax_km: f64) -> StormState {
        StormState { center: LatLon::new(18.0, -66.0), vmax, rmax_km, translation: (0.0, 0.0) }
    }

    /// Point `r_km` due north of `c`.
    fn north_of(c: LatLon, r_km: f64) -> LatLon {
        LatLon::new(c.lat + (r_km / EARTH_RADIUS_KM).to_degrees(), c.lon)
    }

    #[test]
    fn peak_at_rmax() {
        let p = HollandProfile { shape_b: 1.3 };
        assert_eq!(p.speed(40.0, 30.0, 30.0), 40.0);
        assert_eq!(p.speed(40.0, 30.0, 0.0), 0.0);
    }

    #[test]
    fn centre_is_calm_without_translation() {
        let s = still_storm(40.0, 30.0);
        assert_eq!(sustained_wind_at(s.center, &s, &WindProfileParams::default()), 0.0);
    }

    #[test]
    fn value_at_twice_rmax() {
        // 40 · sqrt(0.5^1.3 · exp(1 − 0.5^1.3)), computed independently
        let p = HollandProfile { shape_b: 1.3 };
        assert!((p.speed(40.0, 30.0, 60.0) - 34.304_299_208_085_09).abs() < 1e-10);

        let s = still_storm(40.0, 30.0);
        let at = north_of(s.center, 60.0);
        let v = sustained_wind_at(at, &s, &WindProfileParams::default());
        assert!((v - 34.3043).abs() < 1e-3, "{v}");
    }

    #[test]
    fn cyclonic_direction() {
        // north of the centre the NH flow is westward, so adding a westward
        // translation (no rotation) strengthens it
        let mut s = still_storm(30.0, 30.0);
        s.translation = (-5.0, 0.0);
        let params = WindProfileParams { asym_theta: 0.0, asym_alpha: 1.0, ..Default::default() };
        let n = sustained_wind_at(north_of(s.center, 30.0), &s, &params);
        let south = LatLon::new(2.0 * s.center.lat - north_of(s.center, 30.0).lat, s.center.lon);
        let sv = sustained_wind_at(south, &s, &params);
        assert!((n - 35.0).abs() < 1e-6, "{n}");
        assert!((sv - 25.0).abs() < 1e-6, "{sv}");
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(WindProfileParams { shape_b: 0.0, ..Default::default() }.validate().is_err());
        assert!(WindProfileParams { asym_alpha: 1.5, ..Default::default() }.validate().is_err());
        assert!(WindProfileParams::default().validate().is_ok());
    }
}

//! Distribution network description: feeders, poles, loads and regions.

mod fragility;

pub use fragility::{parse_fragility, parse_fragility_reader, write_fragility, FragilityParams, MedianCheck, RegionFragilityTable};

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geo::LatLon;
use crate::time::Timestamp;
use crate::wind::{BBox, WindError, WindFieldSeries};

#[derive(Debug, thiserror::Error)]
pub enum NetworkError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed network file: {0}")]
    MalformedFile(String),
    #[error("duplicate feeder id '{0}'")]
    DuplicateFeederId(String),
    #[error("feeder '{0}' references a region not listed in regions")]
    UnknownRegion(String),
    #[error("feeder '{0}' has no poles")]
    EmptyPoles(String),
    #[error("feeder '{0}': {1}")]
    InvalidFeeder(String, String),
    #[error("feeder '{0}' has a pole outside the bounding box")]
    PoleOutOfBounds(String),
    #[error("malformed fragility row at line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("region '{0}': beta must be > 0")]
    NonPositiveBeta(String),
    #[error("region '{0}': median wind exp(lambda) outside 10-500 mph")]
    MedianOutOfRange(String),
    #[error("duplicate fragility region '{0}'")]
    DuplicateRegion(String),
    #[error("no fragility parameters for region '{0}'")]
    MissingRegion(String),
    #[error("invalid synthetic network settings: {0}")]
    InvalidSynthConfig(String),
    #[error(transparent)]
    Wind(#[from] WindError),
}

/// Load demand at a point in time (optional time-varying profile).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoadPoint {
    pub timestamp: Timestamp,
    pub load_mw: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Feeder {
    pub id: String,
    pub substation_id: String,
    pub region: String,
    pub poles: Vec<LatLon>,
    /// Static demand L_i, MW.
    pub load_mw: f64,
    /// Step-and-hold load profile; `load_mw` applies before its first entry.
    pub load_curve: Option<Vec<LoadPoint>>,
}

impl Feeder {
    pub fn load_at(&self, t: Timestamp) -> f64 {
        match &self.load_curve {
            Some(curve) => {
                let k = curve.partition_point(|p| p.timestamp <= t);
                if k == 0 {
                    self.load_mw
                } else {
                    curve[k - 1].load_mw
                }
            }
            None => self.load_mw,
        }
    }

    fn validate(&self) -> Result<(), NetworkError> {
        let bad = |msg: String| NetworkError::InvalidFeeder(self.id.clone(), msg);
        if self.poles.is_empty() {
            return Err(NetworkError::EmptyPoles(self.id.clone()));
        }
        if let Some(p) = self.poles.iter().find(|p| !p.is_valid()) {
            return Err(bad(format!("pole ({}, {}) out of range", p.lat, p.lon)));
        }
        if !(self.load_mw.is_finite() && self.load_mw >= 0.0) {
            return Err(bad(format!("load {} must be finite and >= 0", self.load_mw)));
        }
        if let Some(curve) = &self.load_curve {
            if curve.windows(2).any(|w| w[1].timestamp <= w[0].timestamp) {
                return Err(bad("load curve timestamps must increase".into()));
            }
            if curve.iter().any(|p| !(p.load_mw.is_finite() && p.load_mw >= 0.0)) {
                return Err(bad("load curve values must be finite and >= 0".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    regions: Vec<String>,
    feeders: Vec<Feeder>,
}

impl Network {
    pub fn new(regions: Vec<String>, feeders: Vec<Feeder>) -> Result<Self, NetworkError> {
        let known: HashSet<&str> = regions.iter().map(String::as_str).collect();
        let mut seen = HashSet::new();
        for f in &feeders {
            if !seen.insert(f.id.as_str()) {
                return Err(NetworkError::DuplicateFeederId(f.id.clone()));
            }
            f.validate()?;
            if !known.contains(f.region.as_str()) {
                return Err(NetworkError::UnknownRegion(f.id.clone()));
            }
        }
        Ok(Self { regions, feeders })
    }

    pub fn regions(&self) -> &[String] {
        &self.regions
    }

    pub fn feeders(&self) -> &[Feeder] {
        &self.feeders
    }

    pub fn len(&self) -> usize {
        self.feeders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.feeders.is_empty()
    }

    pub fn has_load_curves(&self) -> bool {
        self.feeders.iter().any(|f| f.load_curve.is_some())
    }

    pub fn total_load_mw(&self) -> f64 {
        self.feeders.iter().map(|f| f.load_mw).sum()
    }

    pub fn regional_load_mw(&self) -> BTreeMap<String, f64> {
        let mut out: BTreeMap<String, f64> = self.regions.iter().map(|r| (r.clone(), 0.0)).collect();
        for f in &self.feeders {
            *out.get_mut(&f.region).expect("validated region") += f.load_mw;
        }
        out
    }

    /// Index of each feeder's region in [`Network::regions`].
    pub fn region_indices(&self) -> Vec<usize> {
        self.feeders
            .iter()
            .map(|f| self.regions.iter().position(|r| *r == f.region).expect("validated region"))
            .collect()
    }

    pub fn check_within(&self, bbox: &BBox) -> Result<(), NetworkError> {
        match self.feeders.iter().find(|f| f.poles.iter().any(|p| !bbox.contains(*p))) {
            Some(f) => Err(NetworkError::PoleOutOfBounds(f.id.clone())),
            None => Ok(()),
        }
    }

    pub fn to_json(&self) -> String {
        let file = NetworkFile {
            regions: self.regions.clone(),
            feeders: self
                .feeders
                .iter()
                .map(|f| FeederRecord {
                    id: f.id.clone(),
                    substation_id: f.substation_id.clone(),
                    region: f.region.clone(),
                    load_mw: f.load_mw,
                    poles: f.poles.iter().map(|p| [p.lat, p.lon]).collect(),
                    load_curve: f.load_curve.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("network serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, NetworkError> {
        let file: NetworkFile = serde_json::from_str(text).map_err(|e| NetworkError::MalformedFile(e.to_string()))?;
        let feeders = file
            .feeders
            .into_iter()
            .map(|r| Feeder {
                id: r.id,
                substation_id: r.substation_id,
                region: r.region,
                poles: r.poles.into_iter().map(|[lat, lon]| LatLon::new(lat, lon)).collect(),
                load_mw: r.load_mw,
                load_curve: r.load_curve,
            })
            .collect();
        Network::new(file.regions, feeders)
    }
}

#[derive(Serialize, Deserialize)]
struct NetworkFile {
    regions: Vec<String>,
    feeders: Vec<FeederRecord>,
}

#[derive(Serialize, Deserialize)]
struct FeederRecord {
    id: String,
    substation_id: String,
    region: String,
    load_mw: f64,
    poles: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    load_curve: Option<Vec<LoadPoint>>,
}

pub fn parse_network(path: impl AsRef<Path>) -> Result<Network, NetworkError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| NetworkError::Io { path: path.display().to_string(), source: e })?;
    Network::from_json(&text)
}

pub fn write_network(network: &Network, path: impl AsRef<Path>) -> Result<(), NetworkError> {
    let path = path.as_ref();
    std::fs::write(path, network.to_json() + "\n")
        .map_err(|e| NetworkError::Io { path: path.display().to_string(), source: e })
}

/// Design gust (m/s) of a feeder: maximum over its poles, step-and-hold in time.
pub fn feeder_design_wind(feeder: &Feeder, series: &WindFieldSeries, t: Timestamp) -> Result<f64, WindError> {
    let step = series.step_at(t)?;
    feeder_design_wind_at_step(feeder, series, step)
}

pub fn feeder_design_wind_at_step(feeder: &Feeder, series: &WindFieldSeries, step: usize) -> Result<f64, WindError> {
    feeder
        .poles
        .iter()
        .try_fold(0.0_f64, |acc, p| Ok(acc.max(series.gust_at_step(*p, step)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::time::parse_timestamp;
    use crate::wind::RasterGrid;

    const THREE: &str = r#"{
      "regions": ["Ponce", "Caguas"],
      "feeders": [
        {"id": "F1", "substation_id": "S1", "region": "Ponce", "load_mw": 4.5, "poles": [[18.01, -66.61], [18.02, -66.60]]},
        {"id": "F2", "substation_id": "S1", "region": "Ponce", "load_mw": 3.0, "poles": [[18.03, -66.62]]},
        {"id": "F3", "substation_id": "S2", "region": "Caguas", "load_mw": 6.25, "poles": [[18.23, -66.04]]}
      ]
    }"#;

    fn feeder(id: &str, poles: Vec<LatLon>) -> Feeder {
        Feeder {
            id: id.into(),
            substation_id: "S".into(),
            region: "R".into(),
            poles,
            load_mw: 1.0,
            load_curve: None,
        }
    }

    #[test]
    fn parses_three_feeders() {
        let n = Network::from_json(THREE).unwrap();
        assert_eq!(n.len(), 3);
        assert_eq!(n.regions().len(), 2);
        assert_eq!(n.total_load_mw(), 13.75);
        let regional = n.regional_load_mw();
        assert_eq!(regional["Ponce"], 7.5);
        assert_eq!(regional.values().sum::<f64>(), n.total_load_mw());
        assert_eq!(n.region_indices(), vec![0, 0, 1]);
    }

    #[test]
    fn rejects_invalid_networks() {
        let dup = THREE.replace("\"F2\"", "\"F1\"");
        assert!(matches!(Network::from_json(&dup), Err(NetworkError::DuplicateFeederId(id)) if id == "F1"));
        let unknown = THREE.replace("\"region\": \"Caguas\"", "\"region\": \"Arecibo\"");
        assert!(matches!(Network::from_json(&unknown), Err(NetworkError::UnknownRegion(id)) if id == "F3"));
        let empty = THREE.replace("[[18.03, -66.62]]", "[]");
        assert!(matches!(Network::from_json(&empty), Err(NetworkError::EmptyPoles(id)) if id == "F2"));
        let negative = THREE.replace("6.25", "-1");
        assert!(matches!(Network::from_json(&negative), Err(NetworkError::InvalidFeeder(..))));
        assert!(matches!(Network::from_json("{"), Err(NetworkError::MalformedFile(_))));
    }

    #[test]
    fn json_round_trip() {
        let n = Network::from_json(THREE).unwrap();
        assert_eq!(Network::from_json(&n.to_json()).unwrap(), n);
    }

    #[test]
    fn load_curve_step_and_hold() {
        let mut f = feeder("F", vec![LatLon::new(18.0, -66.0)]);
        let t = |s: &str| parse_timestamp(s).unwrap();
        f.load_curve = Some(vec![
            LoadPoint { timestamp: t("2022-09-18T06:00:00Z"), load_mw: 2.0 },
            LoadPoint { timestamp: t("2022-09-18T12:00:00Z"), load_mw: 3.0 },
        ]);
        assert_eq!(f.load_at(t("2022-09-18T00:00:00Z")), 1.0);
        assert_eq!(f.load_at(t("2022-09-18T06:00:00Z")), 2.0);
        assert_eq!(f.load_at(t("2022-09-18T11:59:00Z")), 2.0);
        assert_eq!(f.load_at(t("2022-09-18T13:00:00Z")), 3.0);
    }

    fn gust_series(values: Vec<f64>) -> WindFieldSeries {
        // 1 row × 2 cols
        let grid = RasterGrid::new(BBox::new(18.0, 18.05, -66.0, -65.9).unwrap(), 0.05).unwrap();
        let t = parse_timestamp("2022-09-18T00:00:00Z").unwrap();
        WindFieldSeries::new(grid, vec![t], vec![values], 1.0).unwrap()
    }

    #[test]
    fn design_wind_is_max_over_poles() {
        let s = gust_series(vec![20.0, 35.0]);
        let t = s.timestamps()[0];
        let west = s.grid().cell_center(0, 0);
        let east = s.grid().cell_center(0, 1);
        let single = feeder("A", vec![west]);
        assert_eq!(feeder_design_wind(&single, &s, t).unwrap(), s.gust_at(west, t).unwrap());
        let both = feeder("B", vec![west, east]);
        assert_eq!(feeder_design_wind(&both, &s, t).unwrap(), 35.0);
        let outside = feeder("C", vec![LatLon::new(17.0, -66.0)]);
        assert!(feeder_design_wind(&outside, &s, t).is_err());
    }
}

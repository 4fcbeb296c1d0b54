//! Seeded synthetic fixtures standing in for proprietary utility data:
//! a clustered feeder network, a reference fragility table, a storm track
//! and an observed outage record derived from the model itself.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, Normal};
use serde::{Deserialize, Serialize};

use crate::analytics::{ObservedOutageSeries, TOTAL};
use crate::engine::OutageModel;
use crate::geo::LatLon;
use crate::network::{FragilityParams, Feeder, Network, NetworkError, RegionFragilityTable};
use crate::time::{parse_timestamp, Timestamp};
use crate::wind::{BBox, TcTrack, TcTrackPoint};

/// Region name, fragility (λ, β in ln-mph) and cluster centre.
pub const REFERENCE_REGIONS: [(&str, f64, f64, f64, f64); 7] = [
    ("Arecibo", 5.0150, 0.8574, 18.40, -66.70),
    ("Bayamon", 4.4308, 0.3012, 18.35, -66.18),
    ("Caguas", 4.1715, 0.2217, 18.20, -66.03),
    ("Carolina", 4.2666, 0.2947, 18.36, -65.93),
    ("Mayaguez", 4.4057, 0.2061, 18.16, -67.10),
    ("Ponce", 4.7084, 0.4379, 18.05, -66.60),
    ("San Juan", 4.4443, 0.4226, 18.42, -66.07),
];

pub const REFERENCE_TOTAL_LOAD_MW: f64 = 2751.0;
pub const REFERENCE_FEEDERS: usize = 936;

pub fn reference_bbox() -> BBox {
    BBox { lat_min: 17.8, lat_max: 18.6, lon_min: -67.4, lon_max: -65.4 }
}

/// 00:00–16:00 UTC on the landfall day.
pub fn reference_window() -> (Timestamp, Timestamp) {
    (
        parse_timestamp("2022-09-18T00:00:00Z").expect("valid"),
        parse_timestamp("2022-09-18T16:00:00Z").expect("valid"),
    )
}

pub fn reference_fragility() -> RegionFragilityTable {
    REFERENCE_REGIONS
        .iter()
        .map(|(name, lambda, beta, _, _)| (name.to_string(), FragilityParams { lambda: *lambda, beta: *beta }))
        .collect()
}

/// Reference parameters for known region names; other regions cycle
/// through the reference rows in order.
pub fn fragility_for_regions(regions: &[String]) -> RegionFragilityTable {
    let mut spare = REFERENCE_REGIONS.iter().cycle();
    regions
        .iter()
        .map(|name| {
            let row = REFERENCE_REGIONS
                .iter()
                .find(|r| r.0 == name)
                .unwrap_or_else(|| spare.next().expect("cycle is endless"));
            (name.clone(), FragilityParams { lambda: row.1, beta: row.2 })
        })
        .collect()
}

/// Six-hourly fixes of a hurricane moving west-northwest along the south
/// coast and crossing the south-west corner of the island.
pub fn reference_track() -> TcTrack {
    let fixes = [
        ("2022-09-18T00:00:00Z", 17.20, -65.10, 33.4, 35.0),
        ("2022-09-18T06:00:00Z", 17.45, -65.75, 35.0, 33.0),
        ("2022-09-18T12:00:00Z", 17.70, -66.40, 36.0, 32.0),
        ("2022-09-18T18:00:00Z", 18.00, -67.05, 38.6, 30.0),
    ];
    let points = fixes
        .iter()
        .map(|(t, lat, lon, vmax, rmax_km)| TcTrackPoint {
            timestamp: parse_timestamp(t).expect("valid"),
            lat: *lat,
            lon: *lon,
            vmax: *vmax,
            rmax_km: *rmax_km,
        })
        .collect();
    TcTrack::new(points).expect("reference track is valid")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthNetworkConfig {
    pub n_feeders: usize,
    pub n_regions: usize,
    pub total_load_mw: f64,
    /// σ of the log-normal load distribution.
    pub load_sigma: f64,
    /// σ (degrees) of feeder positions around their region centre.
    pub cluster_spread_deg: f64,
    pub poles_per_feeder: (usize, usize),
    /// Mean spacing (degrees) between consecutive poles.
    pub pole_step_deg: f64,
    pub bbox: BBox,
    pub seed: u64,
}

impl Default for SynthNetworkConfig {
    fn default() -> Self {
        Self {
            n_feeders: REFERENCE_FEEDERS,
            n_regions: REFERENCE_REGIONS.len(),
            total_load_mw: REFERENCE_TOTAL_LOAD_MW,
            load_sigma: 0.6,
            cluster_spread_deg: 0.08,
            poles_per_feeder: (3, 8),
            pole_step_deg: 0.008,
            bbox: reference_bbox(),
            seed: 2022,
        }
    }
}

fn region_layout(n_regions: usize, bbox: &BBox) -> Vec<(String, LatLon)> {
    if n_regions <= REFERENCE_REGIONS.len() {
        return REFERENCE_REGIONS[..n_regions]
            .iter()
            .map(|(name, _, _, lat, lon)| (name.to_string(), LatLon::new(*lat, *lon)))
            .collect();
    }
    // evenly spaced along the box's central parallel
    let lat = 0.5 * (bbox.lat_min + bbox.lat_max);
    let width = bbox.lon_max - bbox.lon_min;
    (0..n_regions)
        .map(|k| {
            let lon = bbox.lon_min + width * (k as f64 + 0.5) / n_regions as f64;
            (format!("R{:02}", k + 1), LatLon::new(lat, lon))
        })
        .collect()
}

/// Clustered radial feeders with log-normal loads summing to `total_load_mw`.
pub fn synth_network(cfg: &SynthNetworkConfig) -> Result<Network, NetworkError> {
    if cfg.n_feeders == 0 || cfg.n_regions == 0 || cfg.n_regions > cfg.n_feeders {
        return Err(NetworkError::InvalidSynthConfig(format!(
            "need 1 <= regions ({}) <= feeders ({})",
            cfg.n_regions, cfg.n_feeders
        )));
    }
    let (pmin, pmax) = cfg.poles_per_feeder;
    if pmin == 0 || pmin > pmax {
        return Err(NetworkError::InvalidSynthConfig(format!("bad pole count range {pmin}..={pmax}")));
    }
    let bad = |what: &str, v: f64| NetworkError::InvalidSynthConfig(format!("{what} must be finite and > 0, got {v}"));
    let check = |what: &str, v: f64| if v.is_finite() && v > 0.0 { Ok(()) } else { Err(bad(what, v)) };
    check("total_load_mw", cfg.total_load_mw)?;
    check("load_sigma", cfg.load_sigma)?;
    check("cluster_spread_deg", cfg.cluster_spread_deg)?;
    check("pole_step_deg", cfg.pole_step_deg)?;
    cfg.bbox.validate()?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let regions = region_layout(cfg.n_regions, &cfg.bbox);
    let spread = Normal::new(0.0, cfg.cluster_spread_deg).expect("σ > 0");
    let step = Normal::new(0.0, cfg.pole_step_deg).expect("σ > 0");
    let loads = LogNormal::new(0.0, cfg.load_sigma).expect("σ > 0");
    let margin = 0.01;
    let clamp = |p: LatLon| {
        LatLon::new(
            p.lat.clamp(cfg.bbox.lat_min + margin, cfg.bbox.lat_max - margin),
            p.lon.clamp(cfg.bbox.lon_min + margin, cfg.bbox.lon_max - margin),
        )
    };

    let mut raw_loads = Vec::with_capacity(cfg.n_feeders);
    let mut feeders = Vec::with_capacity(cfg.n_feeders);
    for k in 0..cfg.n_feeders {
        let (region, centre) = &regions[k % regions.len()];
        let mut p = clamp(LatLon::new(centre.lat + spread.sample(&mut rng), centre.lon + spread.sample(&mut rng)));
        let n_poles = rng.random_range(pmin..=pmax);
        let mut poles = Vec::with_capacity(n_poles);
        for _ in 0..n_poles {
            poles.push(p);
            p = clamp(LatLon::new(p.lat + step.sample(&mut rng), p.lon + step.sample(&mut rng)));
        }
        raw_loads.push(loads.sample(&mut rng));
        feeders.push(Feeder {
            id: format!("F{:04}", k + 1),
            substation_id: format!("S{:03}", k / 6 + 1),
            region: region.clone(),
            poles,
            load_mw: 0.0,
            load_curve: None,
        });
    }
    let scale = cfg.total_load_mw / raw_loads.iter().sum::<f64>();
    for (f, l) in feeders.iter_mut().zip(&raw_loads) {
        f.load_mw = l * scale;
    }
    // absorb rounding so the loads sum to the requested total
    let residual = cfg.total_load_mw - feeders.iter().map(|f| f.load_mw).sum::<f64>();
    feeders[0].load_mw += residual;

    Network::new(regions.into_iter().map(|(n, _)| n).collect(), feeders)
}

/// Observed record equal to the closed-form expected outage of the
/// resistance sampler, system-wide and per region.
pub fn synth_observed(model: &OutageModel) -> BTreeMap<String, ObservedOutageSeries> {
    let (total, regional) = model.expected_outage();
    let ts = model.timestamps().to_vec();
    let mk = |name: &str, v: Vec<f64>| {
        ObservedOutageSeries::new(name, ts.clone(), v).expect("expected outage lies in [0, 100]")
    };
    let mut out: BTreeMap<String, ObservedOutageSeries> =
        regional.into_iter().map(|(name, v)| (name.clone(), mk(&name, v))).collect();
    out.insert(TOTAL.to_string(), mk(TOTAL, total));
    out
}

use std::collections::BTreeMap;
use std::path::Path;

use super::AnalyticsError;
use crate::time::{format_timestamp, parse_timestamp, Timestamp};

/// Region name used for the system-wide series.
pub const TOTAL: &str = "total";

/// Recorded outage level over time for one region (or [`TOTAL`]).
#[derive(Debug, Clone, PartialEq)]
pub struct ObservedOutageSeries {
    pub region: String,
    timestamps: Vec<Timestamp>,
    outage_pct: Vec<f64>,
}

impl ObservedOutageSeries {
    pub fn new(region: impl Into<String>, timestamps: Vec<Timestamp>, outage_pct: Vec<f64>) -> Result<Self, AnalyticsError> {
        let region = region.into();
        let bad = |reason: String| AnalyticsError::InvalidObserved { region: region.clone(), reason };
        if timestamps.len() != outage_pct.len() || timestamps.is_empty() {
            return Err(bad("timestamps and values must be non-empty and of equal length".into()));
        }
        if timestamps.windows(2).any(|w| w[1] <= w[0]) {
            return Err(bad("timestamps must be strictly increasing".into()));
        }
        if let Some(v) = outage_pct.iter().find(|v| !(0.0..=100.0).contains(*v)) {
            return Err(bad(format!("outage {v} outside [0, 100]")));
        }
        Ok(Self { region, timestamps, outage_pct })
    }

    pub fn timestamps(&self) -> &[Timestamp] {
        &self.timestamps
    }

    pub fn outage_pct(&self) -> &[f64] {
        &self.outage_pct
    }

    /// Observed values at `targets` by step-and-hold (latest sample at or
    /// before each target). Fails when a target precedes or follows the
    /// record, or when the targets are finer than the record.
    pub fn resample_to(&self, targets: &[Timestamp]) -> Result<Vec<f64>, AnalyticsError> {
        let last = self.timestamps[self.timestamps.len() - 1];
        let mut out = Vec::with_capacity(targets.len());
        let mut prev_k = None;
        for t in targets {
            let k = self.timestamps.partition_point(|s| s <= t);
            if k == 0 || *t > last {
                return Err(AnalyticsError::TimestampMismatch(format!(
                    "{} outside observed record {}..{}",
                    format_timestamp(t),
                    format_timestamp(&self.timestamps[0]),
                    format_timestamp(&last)
                )));
            }
            if prev_k == Some(k) {
                return Err(AnalyticsError::TimestampMismatch(format!(
                    "simulation step {} is finer than the observed record",
                    format_timestamp(t)
                )));
            }
            prev_k = Some(k);
            out.push(self.outage_pct[k - 1]);
        }
        Ok(out)
    }
}

/// Reads `timestamp_iso8601,region,outage_pct`, grouped by region.
pub fn parse_observed(path: impl AsRef<Path>) -> Result<BTreeMap<String, ObservedOutageSeries>, AnalyticsError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| AnalyticsError::Io { path: path.display().to_string(), source: e })?;
    parse_observed_reader(file)
}

pub fn parse_observed_reader<R: std::io::Read>(reader: R) -> Result<BTreeMap<String, ObservedOutageSeries>, AnalyticsError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let malformed = |line: usize, reason: String| AnalyticsError::MalformedRow { line, reason };
    let header = rdr.headers().map_err(|e| malformed(1, e.to_string()))?;
    if header.iter().collect::<Vec<_>>() != ["timestamp_iso8601", "region", "outage_pct"] {
        return Err(malformed(1, "expected header timestamp_iso8601,region,outage_pct".into()));
    }
    let mut grouped: BTreeMap<String, (Vec<Timestamp>, Vec<f64>)> = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| malformed(e.position().map(|p| p.line() as usize).unwrap_or(0), e.to_string()))?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let t = parse_timestamp(&rec[0]).ok_or_else(|| malformed(line, format!("bad timestamp '{}'", &rec[0])))?;
        let v: f64 = rec[2].parse().map_err(|_| malformed(line, format!("bad outage '{}'", &rec[2])))?;
        let entry = grouped.entry(rec[1].to_string()).or_default();
        entry.0.push(t);
        entry.1.push(v);
    }
    grouped
        .into_iter()
        .map(|(region, (t, v))| Ok((region.clone(), ObservedOutageSeries::new(region, t, v)?)))
        .collect()
}

pub fn observed_to_csv(series: &BTreeMap<String, ObservedOutageSeries>) -> String {
    let mut out = String::from("timestamp_iso8601,region,outage_pct\n");
    for s in series.values() {
        for (t, v) in s.timestamps.iter().zip(&s.outage_pct) {
            out.push_str(&format!("{},{},{}\n", format_timestamp(t), s.region, v));
        }
    }
    out
}

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Network, NetworkError};

/// Lognormal fragility parameters in log-mph space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FragilityParams {
    /// Mean of ln(wind in mph) at failure.
    pub lambda: f64,
    /// Standard deviation of ln(wind in mph) at failure.
    pub beta: f64,
}

/// Whether to enforce the 10–500 mph sanity range on `exp(lambda)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MedianCheck {
    #[default]
    Enforce,
    Skip,
}

impl FragilityParams {
    pub const MEDIAN_RANGE_MPH: (f64, f64) = (10.0, 500.0);

    pub fn new(lambda: f64, beta: f64) -> Result<Self, NetworkError> {
        Self::checked("", lambda, beta, MedianCheck::Enforce)
    }

    pub fn checked(region: &str, lambda: f64, beta: f64, check: MedianCheck) -> Result<Self, NetworkError> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(NetworkError::NonPositiveBeta(region.to_string()));
        }
        let median = lambda.exp();
        let (lo, hi) = Self::MEDIAN_RANGE_MPH;
        if !lambda.is_finite() || (check == MedianCheck::Enforce && !(lo..=hi).contains(&median)) {
            return Err(NetworkError::MedianOutOfRange(region.to_string()));
        }
        Ok(Self { lambda, beta })
    }

    pub fn median_mph(&self) -> f64 {
        self.lambda.exp()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RegionFragilityTable {
    entries: BTreeMap<String, FragilityParams>,
}

impl RegionFragilityTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, region: impl Into<String>, params: FragilityParams) -> Option<FragilityParams> {
        self.entries.insert(region.into(), params)
    }

    pub fn get(&self, region: &str) -> Option<&FragilityParams> {
        self.entries.get(region)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &FragilityParams)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Every region the network references must have parameters.
    pub fn check_covers(&self, network: &Network) -> Result<(), NetworkError> {
        for f in network.feeders() {
            if !self.entries.contains_key(&f.region) {
                return Err(NetworkError::MissingRegion(f.region.clone()));
            }
        }
        Ok(())
    }

    /// Parameters for every feeder, in network order.
    pub fn per_feeder(&self, network: &Network) -> Result<Vec<FragilityParams>, NetworkError> {
        network
            .feeders()
            .iter()
            .map(|f| self.get(&f.region).copied().ok_or_else(|| NetworkError::MissingRegion(f.region.clone())))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("region,lambda,beta\n");
        for (region, p) in &self.entries {
            out.push_str(&format!("{region},{},{}\n", p.lambda, p.beta));
        }
        out
    }
}

impl FromIterator<(String, FragilityParams)> for RegionFragilityTable {
    fn from_iter<I: IntoIterator<Item = (String, FragilityParams)>>(iter: I) -> Self {
        Self { entries: iter.into_iter().collect() }
    }
}

/// Reads a `region,lambda,beta` CSV.
pub fn parse_fragility(path: impl AsRef<Path>) -> Result<RegionFragilityTable, NetworkError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)
        .map_err(|e| NetworkError::Io { path: path.display().to_string(), source: e })?;
    parse_fragility_reader(file, MedianCheck::Enforce)
}

pub fn parse_fragility_reader<R: std::io::Read>(
    reader: R,
    check: MedianCheck,
) -> Result<RegionFragilityTable, NetworkError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr
        .headers()
        .map_err(|e| NetworkError::MalformedRow { line: 1, reason: e.to_string() })?;
    if header.iter().collect::<Vec<_>>() != ["region", "lambda", "beta"] {
        return Err(NetworkError::MalformedRow { line: 1, reason: "expected header region,lambda,beta".into() });
    }
    let mut table = RegionFragilityTable::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| NetworkError::MalformedRow {
            line: e.position().map(|p| p.line() as usize).unwrap_or(0),
            reason: e.to_string(),
        })?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let num = |k: usize, name: &str| {
            rec[k]
                .parse::<f64>()
                .map_err(|_| NetworkError::MalformedRow { line, reason: format!("bad {name} '{}'", &rec[k]) })
        };
        let region = rec[0].to_string();
        if region.is_empty() {
            return Err(NetworkError::MalformedRow { line, reason: "empty region".into() });
        }
        let params = FragilityParams::checked(&region, num(1, "lambda")?, num(2, "beta")?, check)?;
        if table.insert(region.clone(), params).is_some() {
            return Err(NetworkError::DuplicateRegion(region));
        }
    }
    Ok(table)
}

pub fn write_fragility(table: &RegionFragilityTable, path: impl AsRef<Path>) -> Result<(), NetworkError> {
    let path = path.as_ref();
    std::fs::write(path, table.to_csv()).map_err(|e| NetworkError::Io { path: path.display().to_string(), source: e })
}

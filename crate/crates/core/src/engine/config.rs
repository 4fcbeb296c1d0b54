use serde::{Deserialize, Serialize};

use super::EngineError;
use crate::time::{format_timestamp, time_grid, Timestamp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// One resistance draw per feeder and run, compared against the gust at every step.
    Hrsra,
    /// Fresh Bernoulli trial against the fragility curve at every step.
    Smc,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Hrsra => "hrsra",
            Method::Smc => "smc",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hrsra" => Ok(Method::Hrsra),
            "smc" => Ok(Method::Smc),
            _ => Err(EngineError::InvalidConfig(format!("unknown method '{s}'"))),
        }
    }
}

/// Monte Carlo settings. Outage levels are always reported in percent of load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub n_runs: usize,
    pub dt_s: i64,
    pub start: Timestamp,
    pub end: Timestamp,
    pub method: Method,
    pub master_seed: u64,
    /// Keep per-run feeder failure steps (off by default; memory grows with runs × feeders).
    #[serde(default)]
    pub store_status: bool,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        let bad = |m: String| Err(EngineError::InvalidConfig(m));
        if self.n_runs == 0 || self.n_runs > u32::MAX as usize {
            return bad(format!("n_runs {} must be in 1..=2^32-1", self.n_runs));
        }
        if self.dt_s <= 0 {
            return bad(format!("dt {} s must be positive", self.dt_s));
        }
        if self.start >= self.end {
            return bad(format!(
                "start {} must precede end {}",
                format_timestamp(&self.start),
                format_timestamp(&self.end)
            ));
        }
        let span = (self.end - self.start).num_seconds();
        if span % self.dt_s != 0 {
            return bad(format!("dt {} s does not divide the {span} s span", self.dt_s));
        }
        Ok(())
    }

    pub fn timestamps(&self) -> Vec<Timestamp> {
        time_grid(self.start, self.end, self.dt_s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::time::parse_timestamp;

    fn cfg(dt: i64) -> SimulationConfig {
        SimulationConfig {
            n_runs: 10,
            dt_s: dt,
            start: parse_timestamp("2022-09-18T00:00:00Z").unwrap(),
            end: parse_timestamp("2022-09-18T16:00:00Z").unwrap(),
            method: Method::Hrsra,
            master_seed: 1,
            store_status: false,
        }
    }

    #[test]
    fn validation() {
        assert!(cfg(600).validate().is_ok());
        assert_eq!(cfg(600).timestamps().len(), 97);
        assert!(cfg(7000).validate().is_err());
        assert!(cfg(0).validate().is_err());
        let mut c = cfg(600);
        c.n_runs = 0;
        assert!(c.validate().is_err());
        let mut c = cfg(600);
        c.end = c.start;
        assert!(c.validate().is_err());
    }

    #[test]
    fn method_parses() {
        assert_eq!("HRSRA".parse::<Method>().unwrap(), Method::Hrsra);
        assert_eq!("smc".parse::<Method>().unwrap(), Method::Smc);
        assert!("mcmc".parse::<Method>().is_err());
        assert_eq!(serde_json::to_string(&Method::Smc).unwrap(), "\"smc\"");
    }
}

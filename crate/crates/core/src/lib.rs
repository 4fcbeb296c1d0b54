//! Hurricane wind-field generation and Monte Carlo outage simulation for
//! radial distribution networks.
//!
//! Two samplers share the same fragility curves: a hazard-resistance sampler
//! that draws one time-invariant wind threshold per feeder and run, and a
//! sequential sampler that redraws a Bernoulli trial every time step.

pub mod analytics;
pub mod engine;
pub mod geo;
pub mod network;
pub mod normal;
pub mod synth;
pub mod time;
pub mod wind;

/// Metres per second → miles per hour.
pub const MPH_PER_MS: f64 = 2.236936;

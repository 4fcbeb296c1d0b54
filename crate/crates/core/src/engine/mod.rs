//! Monte Carlo outage simulation: hazard-resistance and sequential samplers.

mod config;
mod ensemble;
mod fragility;
pub mod io;
mod model;
pub mod philox;

pub use config::{Method, SimulationConfig};
pub use ensemble::{FeederStatus, OutageEnsemble, RngTrace, Trajectories};
pub use fragility::{fragility_prob, sample_resistance};
pub use io::{read_ensemble, write_ensemble, EnsembleSummary};
pub use model::{run_hrsra, run_smc, simulate, OutageModel};

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("inputs do not cover the simulation: {0}")]
    CoverageGap(String),
    #[error("uniform variate {0} must lie strictly inside (0, 1)")]
    DegenerateUniform(f64),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed ensemble file: {0}")]
    MalformedFile(String),
}

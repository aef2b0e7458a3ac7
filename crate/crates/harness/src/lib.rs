//! Experiment harness for the multipath coding simulator. Runs replicated
//! sweeps described by JSON configs and writes one CSV row per sweep point.

pub mod config;
pub mod plan;
pub mod report;
pub mod sweep;
pub mod table1;

use thiserror::Error;

pub use config::{ExperimentConfig, Mode, SweepPoint};
pub use report::{format_sig, ResultRow};
pub use sweep::{run_experiment, run_point};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{origin}: {message}")]
    Config { origin: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(
        "{mode} decoding window bound needs {needed} packets, above the limit of {limit}; \
         set decoding_window explicitly or shrink the path delay spread"
    )]
    InfeasibleWindow {
        mode: &'static str,
        needed: f64,
        limit: u64,
    },
    #[error("simulation failed at {scenario}/{mode}/R={rate}/w={window}, seed {seed}: {source}")]
    Sim {
        scenario: String,
        mode: &'static str,
        rate: String,
        window: usize,
        seed: u64,
        #[source]
        source: mpnc::simnet::SimError,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Path(#[from] mpnc::multipath::PathError),
}

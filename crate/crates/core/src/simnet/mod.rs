//! Deterministic discrete-event simulation of one coded multipath session:
//! bursty source, encoder, earliest-available scheduler, lossy delayed
//! paths, decoder, in-order delivery.

mod channel;
mod metrics;
mod rng;
mod sim;
mod traffic;

pub use channel::transmit;
pub use metrics::Metrics;
pub use rng::{stream_rng, Stream};
pub use sim::{run, run_traced, SimConfig, TraceEvent};
pub use traffic::{generate_traffic, TrafficConfig, DEFAULT_HEADER_BYTES};

use thiserror::Error;

use crate::coding::CodingError;
use crate::multipath::PathError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Coding(#[from] CodingError),
    #[error("invalid traffic configuration: {0}")]
    Traffic(String),
    #[error("decoded payload of seq {0} differs from the source payload")]
    Corrupted(u64),
}

//! Multipath transport with finite sliding-window random linear network
//! coding, plus a deterministic discrete-event simulator to measure residual
//! loss and in-order delay over asymmetric lossy paths.

pub mod coding;
pub mod galois;
pub mod multipath;
pub mod simnet;
mod time;

pub use time::SimTime;

//! Paths, the earliest-available scheduler, and the closed-form planner for
//! code-rate limits and receive-buffer sizing.

mod path;
mod planner;
mod scheduler;

pub use path::PathSpec;
pub use planner::{
    code_rate_bound, delay_spread, min_decoding_window_sliding, min_generations_block,
    reorder_buffer_uncoded, total_rate,
};
pub use scheduler::{Assignment, Scheduler};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PathError {
    #[error("at least one path is required")]
    NoPaths,
    #[error("path {index}: rate must be a positive packet rate, got {rate}")]
    BadRate { index: usize, rate: f64 },
    #[error("path {index}: delay must be non-negative, got {delay}")]
    BadDelay { index: usize, delay: f64 },
    #[error("path {index}: loss probability must lie in [0, 1), got {loss}")]
    BadLoss { index: usize, loss: f64 },
    #[error("every path loses all packets; no code rate can succeed")]
    AllPathsDead,
}

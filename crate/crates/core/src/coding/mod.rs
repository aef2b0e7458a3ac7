//! Systematic RLNC over GF(2^8): a credit-paced encoder (finite sliding
//! window or block/generation) and a bounded-window Gaussian-elimination
//! decoder with in-order release.

mod decoder;
mod encoder;
mod packet;
mod rate;

pub use decoder::{Decoder, DecoderStats, Released};
pub use encoder::{Encoder, EncoderConfig, Scheme};
pub use packet::{CodedSymbol, Packet, PacketBody, SourceSymbol};
pub use rate::{CodeRate, Credit};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodingError {
    #[error("invalid code rate {0}: must lie in (0, 1]")]
    InvalidRate(String),
    #[error("invalid coder configuration: {0}")]
    InvalidConfig(String),
    #[error("window of {0} symbols exceeds the 65535-coefficient wire limit")]
    WindowTooLarge(usize),
    #[error("source symbol out of order: expected seq {expected}, got {got}")]
    OutOfOrder { expected: u64, got: u64 },
    #[error("payload length {got} does not match session length {expected}")]
    PayloadLength { expected: usize, got: usize },
    #[error("no source symbols buffered")]
    EmptyWindow,
    #[error("generation boundaries only exist in block mode")]
    NotBlockMode,
    #[error("generation incomplete: {have} of {need} symbols")]
    IncompleteGeneration { have: usize, need: usize },
    #[error("stream already finished")]
    Finished,
    #[error("malformed packet: {0}")]
    Malformed(&'static str),
}

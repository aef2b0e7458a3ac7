use bytes::Bytes;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::SimError;
use crate::coding::SourceSymbol;
use crate::time::SimTime;

/// Per-packet header allowance (IPv4 + UDP) added to the payload when a
/// path rate given in bit/s is turned into packets per second.
pub const DEFAULT_HEADER_BYTES: usize = 28;

fn default_header_bytes() -> usize {
    DEFAULT_HEADER_BYTES
}

/// Frame-based bursty source: `burst_size` packets at every frame instant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrafficConfig {
    pub burst_size: u32,
    /// Frames per second.
    pub frame_rate: f64,
    /// Nominal payload bytes per packet; sets the wire size.
    pub payload_size: usize,
    /// Source packets in the session. The last burst is truncated to fit.
    pub total_packets: u64,
    #[serde(default = "default_header_bytes")]
    pub header_bytes: usize,
    /// Payload bytes actually generated and coded per symbol. Which symbols
    /// decode does not depend on payload contents, so long sweeps can use a
    /// short symbol while rates still follow `payload_size`. Defaults to
    /// `payload_size`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol_bytes: Option<usize>,
}

impl TrafficConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: &str| Err(SimError::Traffic(m.to_string()));
        if self.burst_size == 0 {
            return bad("burst_size must be positive");
        }
        if !(self.frame_rate.is_finite() && self.frame_rate > 0.0) {
            return bad("frame_rate must be positive");
        }
        if self.payload_size == 0 {
            return bad("payload_size must be positive");
        }
        if self.total_packets == 0 {
            return bad("total_packets must be positive");
        }
        if self.symbol_bytes == Some(0) {
            return bad("symbol_bytes must be positive");
        }
        Ok(())
    }

    /// Source packets per second.
    pub fn packet_rate(&self) -> f64 {
        self.burst_size as f64 * self.frame_rate
    }

    /// Offered payload load in bit/s.
    pub fn offered_bitrate(&self) -> f64 {
        self.packet_rate() * self.payload_size as f64 * 8.0
    }

    /// Bits one packet occupies on a path.
    pub fn wire_bits(&self) -> f64 {
        ((self.payload_size + self.header_bytes) * 8) as f64
    }

    /// Converts a path capacity in bit/s to packets per second.
    pub fn packets_per_second(&self, bits_per_second: f64) -> f64 {
        bits_per_second / self.wire_bits()
    }

    pub fn symbol_len(&self) -> usize {
        self.symbol_bytes.unwrap_or(self.payload_size)
    }

    /// Start of frame `k`.
    pub fn frame_time(&self, k: u64) -> SimTime {
        SimTime::from_secs_f64(k as f64 / self.frame_rate)
    }

    pub fn frames(&self) -> u64 {
        self.total_packets.div_ceil(self.burst_size as u64)
    }
}

/// The whole source stream, in sequence order. Every packet of a burst is
/// stamped with its frame instant; payload bytes come from `rng`.
pub fn generate_traffic<R: Rng>(cfg: &TrafficConfig, rng: &mut R) -> Vec<SourceSymbol> {
    let len = cfg.symbol_len();
    let mut out = Vec::with_capacity(cfg.total_packets as usize);
    for seq in 0..cfg.total_packets {
        let frame = seq / cfg.burst_size as u64;
        let mut payload = vec![0u8; len];
        rng.fill(&mut payload[..]);
        out.push(SourceSymbol {
            seq,
            payload: Bytes::from(payload),
            created_at: cfg.frame_time(frame),
        });
    }
    out
}

use bytes::{Buf, BufMut, Bytes, BytesMut};

use super::CodingError;
use crate::galois;
use crate::time::SimTime;

/// One application packet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceSymbol {
    pub seq: u64,
    pub payload: Bytes,
    /// Creation time at the sender. Not carried on the wire.
    pub created_at: SimTime,
}

/// A GF(2^8) combination of consecutive source symbols starting at
/// `window_start`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodedSymbol {
    pub window_start: u64,
    pub coefficients: Vec<u8>,
    pub payload: Bytes,
}

impl CodedSymbol {
    /// Newest source sequence number covered.
    pub fn window_end(&self) -> u64 {
        self.window_start + self.coefficients.len() as u64 - 1
    }

    /// Builds the combination `sum_j coefficients[j] * symbols[j].payload`.
    pub fn combine<'a, I>(window_start: u64, coefficients: Vec<u8>, payloads: I, len: usize) -> Self
    where
        I: IntoIterator<Item = &'a [u8]>,
    {
        let mut out = vec![0u8; len];
        for (c, p) in coefficients.iter().zip(payloads) {
            galois::mul_add_assign(&mut out, p, *c);
        }
        CodedSymbol {
            window_start,
            coefficients,
            payload: Bytes::from(out),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PacketBody {
    Systematic(SourceSymbol),
    Coded(CodedSymbol),
}

/// A unit handed to the scheduler. `send_seq` is the sender's global
/// transmission index and is not part of the wire format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packet {
    pub send_seq: u64,
    pub body: PacketBody,
}

const KIND_SYSTEMATIC: u8 = 0;
const KIND_CODED: u8 = 1;

impl Packet {
    pub fn is_coded(&self) -> bool {
        matches!(self.body, PacketBody::Coded(_))
    }

    pub fn payload(&self) -> &Bytes {
        match &self.body {
            PacketBody::Systematic(s) => &s.payload,
            PacketBody::Coded(c) => &c.payload,
        }
    }

    /// Newest source sequence number this packet refers to.
    pub fn newest_seq(&self) -> u64 {
        match &self.body {
            PacketBody::Systematic(s) => s.seq,
            PacketBody::Coded(c) => c.window_end(),
        }
    }

    /// Oldest source sequence number this packet refers to.
    pub fn oldest_seq(&self) -> u64 {
        match &self.body {
            PacketBody::Systematic(s) => s.seq,
            PacketBody::Coded(c) => c.window_start,
        }
    }

    /// Wire encoding. All integers are big-endian.
    ///
    /// ```text
    /// systematic: 0x00 | seq u64 | payload
    /// coded:      0x01 | window_start u64 | count u16 | coefficients | payload
    /// ```
    pub fn to_bytes(&self) -> Result<Bytes, CodingError> {
        let mut buf = BytesMut::with_capacity(11 + self.payload().len());
        match &self.body {
            PacketBody::Systematic(s) => {
                buf.put_u8(KIND_SYSTEMATIC);
                buf.put_u64(s.seq);
                buf.put_slice(&s.payload);
            }
            PacketBody::Coded(c) => {
                let count = u16::try_from(c.coefficients.len())
                    .map_err(|_| CodingError::WindowTooLarge(c.coefficients.len()))?;
                if count == 0 {
                    return Err(CodingError::Malformed("coded packet without coefficients"));
                }
                buf.put_u8(KIND_CODED);
                buf.put_u64(c.window_start);
                buf.put_u16(count);
                buf.put_slice(&c.coefficients);
                buf.put_slice(&c.payload);
            }
        }
        Ok(buf.freeze())
    }

    /// Parses the wire encoding. `send_seq` and `created_at` are not on the
    /// wire and come back as zero.
    pub fn from_bytes(mut data: Bytes) -> Result<Packet, CodingError> {
        if data.is_empty() {
            return Err(CodingError::Malformed("empty packet"));
        }
        let body = match data.get_u8() {
            KIND_SYSTEMATIC => {
                if data.remaining() < 8 {
                    return Err(CodingError::Malformed("truncated systematic header"));
                }
                let seq = data.get_u64();
                PacketBody::Systematic(SourceSymbol {
                    seq,
                    payload: data,
                    created_at: SimTime::ZERO,
                })
            }
            KIND_CODED => {
                if data.remaining() < 10 {
                    return Err(CodingError::Malformed("truncated coded header"));
                }
                let window_start = data.get_u64();
                let count = data.get_u16() as usize;
                if count == 0 {
                    return Err(CodingError::Malformed("coded packet without coefficients"));
                }
                if data.remaining() < count {
                    return Err(CodingError::Malformed("truncated coefficient vector"));
                }
                let coefficients = data.split_to(count).to_vec();
                window_start
                    .checked_add(count as u64 - 1)
                    .ok_or(CodingError::Malformed("window overflows sequence space"))?;
                PacketBody::Coded(CodedSymbol {
                    window_start,
                    coefficients,
                    payload: data,
                })
            }
            _ => return Err(CodingError::Malformed("unknown packet kind")),
        };
        Ok(Packet { send_seq: 0, body })
    }
}

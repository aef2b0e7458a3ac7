use std::collections::VecDeque;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::packet::{CodedSymbol, Packet, PacketBody, SourceSymbol};
use super::rate::{CodeRate, Credit};
use super::CodingError;

/// How source symbols are grouped for coding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Coded symbols combine the most recent `window` source symbols.
    Sliding { window: usize },
    /// Coded symbols combine the symbols of the current generation of
    /// `generation` consecutive source symbols.
    Block { generation: usize },
}

impl Scheme {
    /// Encoding window or generation size.
    pub fn window(&self) -> usize {
        match *self {
            Scheme::Sliding { window } => window,
            Scheme::Block { generation } => generation,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Sliding { .. } => "sliding",
            Scheme::Block { .. } => "block",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EncoderConfig {
    pub rate: CodeRate,
    pub scheme: Scheme,
}

impl EncoderConfig {
    pub fn sliding(rate: CodeRate, window: usize) -> Self {
        EncoderConfig {
            rate,
            scheme: Scheme::Sliding { window },
        }
    }

    pub fn block(rate: CodeRate, generation: usize) -> Self {
        EncoderConfig {
            rate,
            scheme: Scheme::Block { generation },
        }
    }

    pub fn validate(&self) -> Result<(), CodingError> {
        let w = self.scheme.window();
        if w == 0 {
            return Err(CodingError::InvalidConfig("window must be positive".into()));
        }
        if w > u16::MAX as usize {
            return Err(CodingError::WindowTooLarge(w));
        }
        if let (Scheme::Sliding { window }, Some(min)) = (self.scheme, self.rate.min_sliding_window()) {
            if (window as u64) < min {
                return Err(CodingError::InvalidConfig(format!(
                    "encoding window {window} is smaller than {min}, the number of source \
                     symbols sent per coded symbol at rate {}",
                    self.rate
                )));
            }
        }
        Ok(())
    }
}

/// Systematic encoder with credit-paced redundancy.
///
/// Every source symbol is forwarded as-is. Redundancy is paced by a credit
/// counter: each pushed symbol adds `1/R - 1` and every whole unit yields
/// one coded symbol, emitted right after the systematic packet that
/// completed it.
pub struct Encoder<R = ChaCha8Rng> {
    config: EncoderConfig,
    buffer: VecDeque<SourceSymbol>,
    next_seq: u64,
    credit: Credit,
    rng: R,
    send_seq: u64,
    payload_len: Option<usize>,
    coded_sent: u64,
    finished: bool,
}

impl<R: Rng> Encoder<R> {
    pub fn new(config: EncoderConfig, rng: R) -> Result<Self, CodingError> {
        config.validate()?;
        Ok(Encoder {
            config,
            buffer: VecDeque::with_capacity(config.scheme.window()),
            next_seq: 0,
            credit: Credit::new(config.rate),
            rng,
            send_seq: 0,
            payload_len: None,
            coded_sent: 0,
            finished: false,
        })
    }

    pub fn config(&self) -> &EncoderConfig {
        &self.config
    }

    /// Current credit, always below one between calls.
    pub fn credit(&self) -> f64 {
        self.credit.value()
    }

    pub fn coded_sent(&self) -> u64 {
        self.coded_sent
    }

    /// Symbols a coded packet would combine right now.
    pub fn buffered(&self) -> usize {
        self.buffer.len()
    }

    /// Oldest buffered sequence number.
    pub fn buffer_start(&self) -> Option<u64> {
        self.buffer.front().map(|s| s.seq)
    }

    /// Accepts the next source symbol and returns the packets to send, in
    /// order: its systematic packet, then any coded packets the credit pays for.
    pub fn push_source(&mut self, symbol: SourceSymbol) -> Result<Vec<Packet>, CodingError> {
        if self.finished {
            return Err(CodingError::Finished);
        }
        if symbol.seq != self.next_seq {
            return Err(CodingError::OutOfOrder {
                expected: self.next_seq,
                got: symbol.seq,
            });
        }
        match self.payload_len {
            Some(len) if len != symbol.payload.len() => {
                return Err(CodingError::PayloadLength {
                    expected: len,
                    got: symbol.payload.len(),
                })
            }
            None => self.payload_len = Some(symbol.payload.len()),
            _ => {}
        }

        let mut out = Vec::with_capacity(2);
        match self.config.scheme {
            Scheme::Sliding { window } => {
                self.buffer.push_back(symbol.clone());
                if self.buffer.len() > window {
                    self.buffer.pop_front();
                }
            }
            Scheme::Block { generation } => {
                if self.buffer.len() == generation {
                    out.extend(self.end_generation()?);
                }
                self.buffer.push_back(symbol.clone());
            }
        }
        self.next_seq += 1;

        out.push(self.wrap(PacketBody::Systematic(symbol)));
        self.credit.on_source();
        while self.credit.try_spend() {
            let coded = self.make_coded()?;
            out.push(self.wrap(PacketBody::Coded(coded)));
        }
        Ok(out)
    }

    /// Draws fresh uniform coefficients over the buffered symbols and
    /// returns their combination. Does not touch the credit counter.
    pub fn make_coded(&mut self) -> Result<CodedSymbol, CodingError> {
        let start = self.buffer_start().ok_or(CodingError::EmptyWindow)?;
        let coefficients: Vec<u8> = (0..self.buffer.len()).map(|_| self.rng.gen::<u8>()).collect();
        let len = self.payload_len.unwrap_or(0);
        self.coded_sent += 1;
        Ok(CodedSymbol::combine(
            start,
            coefficients,
            self.buffer.iter().map(|s| &s.payload[..]),
            len,
        ))
    }

    /// Closes a complete generation. Block scheme only.
    pub fn end_generation(&mut self) -> Result<Vec<Packet>, CodingError> {
        let Scheme::Block { generation } = self.config.scheme else {
            return Err(CodingError::NotBlockMode);
        };
        if self.buffer.len() != generation {
            return Err(CodingError::IncompleteGeneration {
                have: self.buffer.len(),
                need: generation,
            });
        }
        let mut out = Vec::new();
        while self.credit.try_spend() {
            let coded = self.make_coded()?;
            out.push(self.wrap(PacketBody::Coded(coded)));
        }
        self.buffer.clear();
        Ok(out)
    }

    /// Ends the stream.
    ///
    /// The newest symbols would normally keep appearing in coded packets for
    /// as long as they stay in the window (sliding) or until the generation
    /// fills up (block). The credit keeps running over those slots against
    /// the frozen buffer, and a leftover fraction is rounded up into one
    /// more coded packet, so the tail gets the same redundancy as the rest of
    /// the stream.
    pub fn finish(&mut self) -> Vec<Packet> {
        let mut out = Vec::new();
        if !self.finished && !self.buffer.is_empty() {
            let slots = match self.config.scheme {
                Scheme::Sliding { window } => window - 1,
                Scheme::Block { generation } => generation - self.buffer.len(),
            };
            for _ in 0..slots {
                self.credit.on_source();
                while self.credit.try_spend() {
                    if let Ok(coded) = self.make_coded() {
                        out.push(self.wrap(PacketBody::Coded(coded)));
                    }
                }
            }
            if self.credit.has_fraction() {
                if let Ok(coded) = self.make_coded() {
                    out.push(self.wrap(PacketBody::Coded(coded)));
                }
            }
        }
        self.credit.clear();
        self.finished = true;
        out
    }

    fn wrap(&mut self, body: PacketBody) -> Packet {
        let p = Packet {
            send_seq: self.send_seq,
            body,
        };
        self.send_seq += 1;
        p
    }
}

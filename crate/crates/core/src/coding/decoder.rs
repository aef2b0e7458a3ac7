use std::collections::{BTreeMap, VecDeque};

use bytes::Bytes;

use super::packet::{Packet, PacketBody};
use super::CodingError;
use crate::galois;
use crate::time::SimTime;

/// A source symbol handed to the application, in sequence order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Released {
    pub seq: u64,
    pub payload: Bytes,
    pub at: SimTime,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecoderStats {
    pub delivered: u64,
    pub lost: u64,
}

/// One equation of the elimination matrix. Coefficients are indexed from
/// `start`, which is also the pivot column; `coeffs[0]` is always 1.
#[derive(Clone, Debug)]
struct Row {
    start: u64,
    coeffs: Vec<u8>,
    payload: Vec<u8>,
}

impl Row {
    fn coeff(&self, seq: u64) -> u8 {
        if seq < self.start {
            return 0;
        }
        self.coeffs.get((seq - self.start) as usize).copied().unwrap_or(0)
    }

    fn end(&self) -> u64 {
        self.start + self.coeffs.len() as u64
    }

    fn extend_to(&mut self, end: u64) {
        if end > self.end() {
            self.coeffs.resize((end - self.start) as usize, 0);
        }
    }

    /// `self -= c * other`. `other` must not start before `self`.
    fn sub_scaled(&mut self, other: &Row, c: u8) {
        debug_assert!(other.start >= self.start);
        self.extend_to(other.end());
        let off = (other.start - self.start) as usize;
        galois::mul_add_assign(&mut self.coeffs[off..off + other.coeffs.len()], &other.coeffs, c);
        galois::mul_add_assign(&mut self.payload, &other.payload, c);
    }

    fn is_singleton(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Drops leading and trailing zero coefficients and scales the leading
    /// one to 1. Returns `false` if the row is all zero.
    fn normalize(&mut self) -> bool {
        let Some(lead) = self.coeffs.iter().position(|&c| c != 0) else {
            return false;
        };
        let tail = self.coeffs.iter().rposition(|&c| c != 0).unwrap();
        self.coeffs.truncate(tail + 1);
        self.coeffs.drain(..lead);
        self.start += lead as u64;
        let inv = galois::inv(self.coeffs[0]).expect("leading coefficient is nonzero");
        galois::scale_assign(&mut self.coeffs, inv);
        galois::scale_assign(&mut self.payload, inv);
        true
    }
}

/// Gaussian-elimination decoder over a bounded window of source sequence
/// numbers, with in-order release.
///
/// The window `[low, high]` always ends at the newest sequence number any
/// packet has referenced and spans at most `capacity` symbols. Symbols that
/// fall out of the window undecoded are lost for good. Coded packets that
/// still depend on an unknown below the window are useless and dropped.
///
/// The matrix is kept in reduced row-echelon form: a pivot column appears in
/// exactly one row, and rows never reference a symbol that is already known.
pub struct Decoder {
    capacity: usize,
    low: u64,
    /// Payloads of known symbols for `low..low + slots.len()`.
    slots: VecDeque<Option<Bytes>>,
    rows: BTreeMap<u64, Row>,
    next_release: u64,
    stats: DecoderStats,
    payload_len: Option<usize>,
    released: Vec<Released>,
}

impl Decoder {
    pub fn new(capacity: usize) -> Result<Decoder, CodingError> {
        if capacity == 0 {
            return Err(CodingError::InvalidConfig("decoding window must be positive".into()));
        }
        Ok(Decoder {
            capacity,
            low: 0,
            slots: VecDeque::with_capacity(capacity),
            rows: BTreeMap::new(),
            next_release: 0,
            stats: DecoderStats::default(),
            payload_len: None,
            released: Vec::new(),
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn stats(&self) -> DecoderStats {
        self.stats
    }

    /// Number of stored equations that still involve unknown symbols.
    pub fn pending(&self) -> usize {
        self.rows.len()
    }

    /// Rank of the linear system over the tracked window: decoded symbols
    /// plus pending equations.
    pub fn rank(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count() + self.rows.len()
    }

    /// Tracked sequence range `[low, high]`, if anything has been seen.
    pub fn window(&self) -> Option<(u64, u64)> {
        if self.slots.is_empty() {
            None
        } else {
            Some((self.low, self.low + self.slots.len() as u64 - 1))
        }
    }

    /// Next sequence number waiting for release.
    pub fn next_release(&self) -> u64 {
        self.next_release
    }

    pub fn is_known(&self, seq: u64) -> bool {
        self.slot(seq).is_some_and(|s| s.is_some())
    }

    /// Feeds one received packet and returns every symbol that became
    /// releasable in order.
    pub fn add(&mut self, packet: &Packet, now: SimTime) -> Result<Vec<Released>, CodingError> {
        let len = packet.payload().len();
        match self.payload_len {
            Some(expected) if expected != len => {
                return Err(CodingError::PayloadLength { expected, got: len })
            }
            None => self.payload_len = Some(len),
            _ => {}
        }

        match &packet.body {
            PacketBody::Systematic(s) => {
                if s.seq >= self.low {
                    self.advance_to(s.seq, now);
                    if !self.is_known(s.seq) {
                        self.learn(s.seq, s.payload.clone());
                    }
                }
            }
            PacketBody::Coded(c) => {
                if c.coefficients.is_empty() {
                    return Err(CodingError::Malformed("coded packet without coefficients"));
                }
                self.advance_to(c.window_end(), now);
                self.add_coded(c.window_start, &c.coefficients, &c.payload);
            }
        }
        self.release(now);
        Ok(std::mem::take(&mut self.released))
    }

    /// Ends the session: everything still undecoded is lost, everything
    /// decoded but held back is released.
    pub fn finish(&mut self, now: SimTime) -> Vec<Released> {
        while !self.slots.is_empty() {
            self.evict_front(now);
        }
        self.rows.clear();
        std::mem::take(&mut self.released)
    }

    fn slot(&self, seq: u64) -> Option<&Option<Bytes>> {
        if seq < self.low {
            return None;
        }
        self.slots.get((seq - self.low) as usize)
    }

    fn high_end(&self) -> u64 {
        self.low + self.slots.len() as u64
    }

    fn advance_to(&mut self, newest: u64, now: SimTime) {
        if newest < self.high_end() {
            return;
        }
        // Jumps far past the window just lose everything in between.
        let keep_from = (newest + 1).saturating_sub(self.capacity as u64);
        while !self.slots.is_empty() && self.low < keep_from {
            self.evict_front(now);
        }
        if self.slots.is_empty() && self.low < keep_from {
            let skipped = keep_from - self.low;
            debug_assert_eq!(self.next_release, self.low);
            self.stats.lost += skipped;
            self.next_release = keep_from;
            self.low = keep_from;
        }
        while self.high_end() <= newest {
            self.slots.push_back(None);
        }
        debug_assert!(self.slots.len() <= self.capacity);
    }

    fn evict_front(&mut self, now: SimTime) {
        let seq = self.low;
        let slot = self.slots.pop_front().expect("non-empty window");
        if self.next_release == seq {
            match slot {
                Some(payload) => {
                    self.stats.delivered += 1;
                    self.released.push(Released { seq, payload, at: now });
                }
                None => self.stats.lost += 1,
            }
            self.next_release += 1;
        }
        // A row pivoted on an unknown that is leaving carries no usable
        // information about the remaining symbols.
        self.rows.remove(&seq);
        self.low += 1;
        self.release(now);
    }

    fn release(&mut self, now: SimTime) {
        while let Some(Some(payload)) = self.slot(self.next_release) {
            let payload = payload.clone();
            self.released.push(Released {
                seq: self.next_release,
                payload,
                at: now,
            });
            self.stats.delivered += 1;
            self.next_release += 1;
        }
    }

    /// Records a newly known symbol and removes it from every equation.
    fn learn(&mut self, seq: u64, payload: Bytes) {
        let idx = (seq - self.low) as usize;
        debug_assert!(self.slots[idx].is_none());
        self.slots[idx] = Some(payload.clone());

        if let Some(mut row) = self.rows.remove(&seq) {
            // The equation survives as a relation among its other unknowns.
            row.coeffs[0] = 0;
            galois::mul_add_assign(&mut row.payload, &payload, 1);
            self.insert(row);
            return;
        }
        let mut solved = Vec::new();
        for (&pivot, row) in self.rows.range_mut(..seq) {
            let c = row.coeff(seq);
            if c != 0 {
                row.coeffs[(seq - row.start) as usize] = 0;
                galois::mul_add_assign(&mut row.payload, &payload, c);
                if row.is_singleton() {
                    solved.push(pivot);
                }
            }
        }
        for pivot in solved {
            self.solve(pivot);
        }
    }

    fn solve(&mut self, pivot: u64) {
        let row = self.rows.remove(&pivot).expect("row exists");
        debug_assert!(row.is_singleton());
        let idx = (pivot - self.low) as usize;
        self.slots[idx] = Some(Bytes::from(row.payload));
    }

    fn add_coded(&mut self, window_start: u64, coefficients: &[u8], payload: &[u8]) {
        let below = self.low.saturating_sub(window_start).min(coefficients.len() as u64) as usize;
        if coefficients[..below].iter().any(|&c| c != 0) {
            return;
        }
        let row = Row {
            start: window_start + below as u64,
            coeffs: coefficients[below..].to_vec(),
            payload: payload.to_vec(),
        };
        self.insert(row);
    }

    /// Reduces `row` against known symbols and existing pivots and, if it
    /// is independent, adds it to the matrix.
    fn insert(&mut self, mut row: Row) {
        let mut i = 0;
        while i < row.coeffs.len() {
            let c = row.coeffs[i];
            if c != 0 {
                let seq = row.start + i as u64;
                if let Some(Some(known)) = self.slot(seq) {
                    galois::mul_add_assign(&mut row.payload, known, c);
                    row.coeffs[i] = 0;
                } else if let Some(other) = self.rows.get(&seq) {
                    row.sub_scaled(other, c);
                }
            }
            i += 1;
        }
        if !row.normalize() {
            return;
        }

        let pivot = row.start;
        let mut solved = Vec::new();
        for (&p, other) in self.rows.range_mut(..pivot) {
            let c = other.coeff(pivot);
            if c != 0 {
                other.sub_scaled(&row, c);
                if other.is_singleton() {
                    solved.push(p);
                }
            }
        }
        let singleton = row.is_singleton();
        self.rows.insert(pivot, row);
        if singleton {
            solved.push(pivot);
        }
        for p in solved {
            self.solve(p);
        }
    }
}

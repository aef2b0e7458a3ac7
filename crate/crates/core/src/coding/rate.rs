use std::fmt;

use serde::{Deserialize, Serialize};

use super::CodingError;

/// Denominator used when a code rate arrives as a decimal.
const DECIMAL_DENOMINATOR: u64 = 1_000_000;

/// Code rate `R = source / (source + coded)` held as an exact fraction.
///
/// Emission counts derived from it are integer arithmetic only, so they are
/// identical on every platform.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct CodeRate {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl CodeRate {
    pub const ONE: CodeRate = CodeRate { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<CodeRate, CodingError> {
        if num == 0 || den == 0 || num > den {
            return Err(CodingError::InvalidRate(format!("{num}/{den}")));
        }
        let g = gcd(num, den);
        Ok(CodeRate {
            num: num / g,
            den: den / g,
        })
    }

    /// Rate from a decimal, resolved to a multiple of 10^-6.
    pub fn from_f64(r: f64) -> Result<CodeRate, CodingError> {
        if !r.is_finite() || r <= 0.0 || r > 1.0 {
            return Err(CodingError::InvalidRate(r.to_string()));
        }
        let num = (r * DECIMAL_DENOMINATOR as f64).round() as u64;
        CodeRate::new(num, DECIMAL_DENOMINATOR)
    }

    /// Rate `n_s / (n_s + 1)`: one coded packet after every `n_s` source packets.
    pub fn from_source_run(n_s: u64) -> Result<CodeRate, CodingError> {
        CodeRate::new(n_s, n_s + 1)
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_uncoded(&self) -> bool {
        self.num == self.den
    }

    /// Smallest sliding encoding window that can hold every source symbol
    /// sent between two consecutive coded symbols: `ceil(R / (1 - R))`.
    /// `None` at `R = 1`, where no coded symbols are sent.
    pub fn min_sliding_window(&self) -> Option<u64> {
        if self.is_uncoded() {
            return None;
        }
        Some(self.num.div_ceil(self.den - self.num))
    }

    /// Coded emissions after `pushes` source symbols from an empty counter:
    /// `floor(pushes * (1/R - 1))`.
    pub fn coded_after(&self, pushes: u64) -> u64 {
        ((pushes as u128 * (self.den - self.num) as u128) / self.num as u128) as u64
    }
}

impl TryFrom<f64> for CodeRate {
    type Error = CodingError;
    fn try_from(r: f64) -> Result<Self, Self::Error> {
        CodeRate::from_f64(r)
    }
}

impl From<CodeRate> for f64 {
    fn from(r: CodeRate) -> f64 {
        r.as_f64()
    }
}

impl fmt::Debug for CodeRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Display for CodeRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_f64())
    }
}

/// Credit counter that paces coded emissions.
///
/// Each source symbol adds `1/R - 1`; each coded symbol spends one unit.
/// The value is kept as a numerator over `R`'s numerator, which makes the
/// increment `den - num` an exact integer.
#[derive(Clone, Debug)]
pub struct Credit {
    rate: CodeRate,
    acc: u64,
}

impl Credit {
    pub fn new(rate: CodeRate) -> Credit {
        Credit { rate, acc: 0 }
    }

    pub fn on_source(&mut self) {
        self.acc += self.rate.den - self.rate.num;
    }

    /// Spend one unit if available.
    pub fn try_spend(&mut self) -> bool {
        if self.acc >= self.rate.num {
            self.acc -= self.rate.num;
            true
        } else {
            false
        }
    }

    /// Non-zero residue below one unit.
    pub fn has_fraction(&self) -> bool {
        self.acc > 0
    }

    pub fn clear(&mut self) {
        self.acc = 0;
    }

    pub fn value(&self) -> f64 {
        self.acc as f64 / self.rate.num as f64
    }
}

//! Arithmetic over GF(2^8).
//!
//! The field is built on the irreducible polynomial
//! x^8 + x^4 + x^3 + x^2 + 1 (`0x11D`), with 2 as the primitive element.
//! Every coding coefficient and every payload byte lives in this field, so
//! encoders and decoders on either side of a link must agree on it.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Sub};

use thiserror::Error;

/// Field polynomial, including the x^8 term.
pub const POLYNOMIAL: u16 = 0x11D;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("zero has no multiplicative inverse in GF(2^8)")]
    ZeroInverse,
}

const fn build_exp_log() -> ([u8; 512], [u8; 256]) {
    let mut exp = [0u8; 512];
    let mut log = [0u8; 256];
    let mut x: u16 = 1;
    let mut i = 0;
    while i < 255 {
        exp[i] = x as u8;
        exp[i + 255] = x as u8;
        log[x as usize] = i as u8;
        x <<= 1;
        if x & 0x100 != 0 {
            x ^= POLYNOMIAL;
        }
        i += 1;
    }
    exp[510] = exp[0];
    exp[511] = exp[1];
    (exp, log)
}

const EXP_LOG: ([u8; 512], [u8; 256]) = build_exp_log();
static EXP: [u8; 512] = EXP_LOG.0;
static LOG: [u8; 256] = EXP_LOG.1;

const fn build_mul_table() -> [[u8; 256]; 256] {
    let (exp, log) = build_exp_log();
    let mut table = [[0u8; 256]; 256];
    let mut a = 1;
    while a < 256 {
        let mut b = 1;
        while b < 256 {
            table[a][b] = exp[log[a] as usize + log[b] as usize];
            b += 1;
        }
        a += 1;
    }
    table
}

// Full product table, one 256-byte row per multiplier. Used by the slice
// kernels where a fixed coefficient scales a whole payload.
static MUL: [[u8; 256]; 256] = build_mul_table();

/// Field addition (and subtraction): bytewise XOR.
#[inline]
pub fn add(a: u8, b: u8) -> u8 {
    a ^ b
}

#[inline]
pub fn mul(a: u8, b: u8) -> u8 {
    MUL[a as usize][b as usize]
}

/// Multiplicative inverse; zero has none.
pub fn inv(a: u8) -> Result<u8, FieldError> {
    if a == 0 {
        return Err(FieldError::ZeroInverse);
    }
    Ok(EXP[255 - LOG[a as usize] as usize])
}

/// `dst[i] += c * src[i]` over the field.
///
/// Slices must have equal length.
pub fn mul_add_assign(dst: &mut [u8], src: &[u8], c: u8) {
    debug_assert_eq!(dst.len(), src.len());
    match c {
        0 => {}
        1 => {
            for (d, s) in dst.iter_mut().zip(src) {
                *d ^= *s;
            }
        }
        _ => {
            let row = &MUL[c as usize];
            for (d, s) in dst.iter_mut().zip(src) {
                *d ^= row[*s as usize];
            }
        }
    }
}

/// `buf[i] *= c` over the field.
pub fn scale_assign(buf: &mut [u8], c: u8) {
    match c {
        1 => {}
        0 => buf.fill(0),
        _ => {
            let row = &MUL[c as usize];
            for b in buf.iter_mut() {
                *b = row[*b as usize];
            }
        }
    }
}

/// A single element of GF(2^8).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Gf256(pub u8);

impl Gf256 {
    pub const ZERO: Gf256 = Gf256(0);
    pub const ONE: Gf256 = Gf256(1);

    pub fn inv(self) -> Result<Gf256, FieldError> {
        inv(self.0).map(Gf256)
    }
}

impl fmt::Debug for Gf256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf256({:#04x})", self.0)
    }
}

impl From<u8> for Gf256 {
    fn from(v: u8) -> Self {
        Gf256(v)
    }
}

impl Add for Gf256 {
    type Output = Gf256;
    fn add(self, rhs: Gf256) -> Gf256 {
        Gf256(add(self.0, rhs.0))
    }
}

impl AddAssign for Gf256 {
    fn add_assign(&mut self, rhs: Gf256) {
        self.0 = add(self.0, rhs.0);
    }
}

impl Sub for Gf256 {
    type Output = Gf256;
    fn sub(self, rhs: Gf256) -> Gf256 {
        Gf256(add(self.0, rhs.0))
    }
}

impl Mul for Gf256 {
    type Output = Gf256;
    fn mul(self, rhs: Gf256) -> Gf256 {
        Gf256(mul(self.0, rhs.0))
    }
}

impl MulAssign for Gf256 {
    fn mul_assign(&mut self, rhs: Gf256) {
        self.0 = mul(self.0, rhs.0);
    }
}

impl Div for Gf256 {
    type Output = Gf256;

    /// Panics on division by zero.
    fn div(self, rhs: Gf256) -> Gf256 {
        let r = rhs.inv().expect("division by zero in GF(2^8)");
        Gf256(mul(self.0, r.0))
    }
}

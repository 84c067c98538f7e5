//! Words of `(F_2)^n` packed into a single `u64`.
//!
//! A word is stored as the integer value of its bitstring: coordinate 0 (the
//! leftmost character when printed) is the most significant of the `n` bits.
//! So `10000111` is `0x87`. Addition, AND and weight are independent of this
//! choice; it only fixes how words are printed, parsed and serialized.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_LENGTH: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitWord {
    len: u8,
    bits: u64,
}

#[inline]
fn mask(len: usize) -> u64 {
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl BitWord {
    /// Word of length `len` whose bitstring has integer value `bits`.
    pub fn new(len: usize, bits: u64) -> Result<Self> {
        if len == 0 || len > MAX_LENGTH {
            return Err(Error::BadLength(len));
        }
        if bits & !mask(len) != 0 {
            return Err(Error::InvalidArgument(format!(
                "value {bits:#x} does not fit in {len} bits"
            )));
        }
        Ok(BitWord {
            len: len as u8,
            bits,
        })
    }

    pub fn zero(len: usize) -> Result<Self> {
        Self::new(len, 0)
    }

    /// Builds a word from its coordinates, coordinate 0 first.
    pub fn from_coords(coords: &[bool]) -> Result<Self> {
        let bits = coords.iter().fold(0u64, |acc, &c| (acc << 1) | c as u64);
        Self::new(coords.len(), bits)
    }

    /// Parses a bitstring such as `10000111`. Whitespace is ignored so the
    /// spaced-out rows of printed matrices parse too.
    pub fn parse_bits(s: &str) -> Result<Self> {
        let coords = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("unexpected character '{other}' in bitstring"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_coords(&coords)
    }

    /// Parses either a bitstring or a `0x`-prefixed hex value of the given length.
    pub fn parse(s: &str, len: usize) -> Result<Self> {
        let s = s.trim();
        if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
            let bits = u64::from_str_radix(hex, 16)
                .map_err(|e| Error::Parse(format!("bad hex word '{s}': {e}")))?;
            return Self::new(len, bits);
        }
        let w = Self::parse_bits(s)?;
        if w.len() != len {
            return Err(Error::LengthMismatch {
                left: w.len(),
                right: len,
            });
        }
        Ok(w)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Coordinate `i`, counting from the left.
    pub fn coord(&self, i: usize) -> bool {
        assert!(i < self.len(), "coordinate {i} out of range for length {}", self.len);
        (self.bits >> (self.len() - 1 - i)) & 1 == 1
    }

    #[inline]
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    fn check(&self, other: &BitWord) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &BitWord) -> Result<BitWord> {
        self.check(other)?;
        Ok(BitWord {
            len: self.len,
            bits: self.bits ^ other.bits,
        })
    }

    pub fn bit_and(&self, other: &BitWord) -> Result<BitWord> {
        self.check(other)?;
        Ok(BitWord {
            len: self.len,
            bits: self.bits & other.bits,
        })
    }

    /// Bytes of the bitstring, left-aligned, most significant bit first.
    pub fn to_msb_bytes(&self) -> Vec<u8> {
        let nbytes = self.len().div_ceil(8);
        let shifted = (self.bits as u128) << (nbytes * 8 - self.len());
        (0..nbytes)
            .map(|i| (shifted >> (8 * (nbytes - 1 - i))) as u8)
            .collect()
    }

    pub fn from_msb_bytes(len: usize, bytes: &[u8]) -> Result<Self> {
        if len == 0 || len > MAX_LENGTH {
            return Err(Error::BadLength(len));
        }
        let nbytes = len.div_ceil(8);
        if bytes.len() != nbytes {
            return Err(Error::InvalidArgument(format!(
                "expected {nbytes} bytes for a {len}-bit word, got {}",
                bytes.len()
            )));
        }
        let acc = bytes.iter().fold(0u128, |acc, &b| (acc << 8) | b as u128);
        let pad = nbytes * 8 - len;
        if acc & ((1u128 << pad) - 1) != 0 {
            return Err(Error::InvalidArgument("nonzero padding bits".into()));
        }
        Self::new(len, (acc >> pad) as u64)
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.bits, width = self.len())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}

/// `|v|/2 mod 2` for a weight known to be even.
#[inline]
pub(crate) fn half(weight: u32) -> u8 {
    debug_assert!(weight.is_multiple_of(2), "half of odd weight {weight}");
    ((weight >> 1) & 1) as u8
}

/// `|v|/4 mod 2` for a weight known to be divisible by four.
#[inline]
pub(crate) fn quarter(weight: u32) -> u8 {
    debug_assert!(weight.is_multiple_of(4), "quarter of weight {weight}");
    ((weight >> 2) & 1) as u8
}

/// Parity of `|u & v & w|` on raw packed words.
#[inline]
pub(crate) fn twist_bits(u: u64, v: u64, w: u64) -> u8 {
    ((u & v & w).count_ones() & 1) as u8
}

#[inline]
pub(crate) fn half_and(v: u64, w: u64) -> u8 {
    half((v & w).count_ones())
}

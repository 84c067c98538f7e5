//! Code cocycles: tables `theta: C x C -> F_2` and Griess's inductive
//! construction of one from an ordered basis of a doubly-even code.
//!
//! A code cocycle satisfies, mod 2,
//!
//! * (I1) `theta(v,w) + theta(u+v,w) + theta(u,v+w) + theta(u,v) = |u & v & w|`
//! * (I2) `theta(v,w) + theta(w,v) = |v & w| / 2`
//! * (I3) `theta(v,v) = |v| / 4`
//!
//! and is normalized: `theta(0,v) = theta(v,0) = 0`.

use std::fmt;
use std::io::{Read, Write};

use crate::bitmatrix::BitMatrix;
use crate::code::Code;
use crate::error::{Error, Result};
use crate::word::{half_and, quarter, twist_bits, BitWord};

/// Largest code dimension for which a full `2^k x 2^k` table is built.
pub const MAX_TABLE_DIM: usize = 13;

pub const TABLE_MAGIC: &[u8; 4] = b"CLT1";

/// The twisting function `|u & v & w| mod 2`.
pub fn twist(u: &BitWord, v: &BitWord, w: &BitWord) -> Result<u8> {
    let uv = u.bit_and(v)?;
    Ok((uv.bit_and(w)?.weight() & 1) as u8)
}

#[derive(Clone, PartialEq, Eq)]
pub struct CocycleTable {
    code: Code,
    bits: BitMatrix,
}

impl CocycleTable {
    /// All-zero table on `code`.
    pub fn zeros(code: Code) -> Result<Self> {
        if code.dimension() > MAX_TABLE_DIM {
            return Err(Error::Capacity(format!(
                "a full table for dimension {} is too large (limit {MAX_TABLE_DIM})",
                code.dimension()
            )));
        }
        let size = code.size();
        code.span_bits()?;
        Ok(CocycleTable {
            code,
            bits: BitMatrix::zeros(size, size),
        })
    }

    /// Table with entry `(r, c)` given by `f` on canonical indices.
    pub fn from_fn(code: Code, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        let mut t = Self::zeros(code)?;
        let size = t.size();
        for r in 0..size {
            for c in 0..size {
                t.bits.set(r, c, f(r, c) & 1);
            }
        }
        Ok(t)
    }

    pub fn code(&self) -> &Code {
        &self.code
    }

    pub fn dimension(&self) -> usize {
        self.code.dimension()
    }

    /// Side length `2^k`.
    pub fn size(&self) -> usize {
        self.bits.rows()
    }

    pub fn bits(&self) -> &BitMatrix {
        &self.bits
    }

    /// `theta` at canonical indices.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.bits.get(row, col)
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, bit: u8) {
        self.bits.set(row, col, bit);
    }

    pub fn flip(&mut self, row: usize, col: usize) {
        self.bits.flip(row, col);
    }

    /// Span in canonical order as packed words.
    #[inline]
    pub fn words(&self) -> &[u64] {
        self.code
            .span_bits()
            .expect("table dimension is within the enumeration cap")
    }

    /// `theta(v, w)` for codewords.
    pub fn value(&self, v: &BitWord, w: &BitWord) -> Result<u8> {
        let r = self.code.require_index(v)? as usize;
        let c = self.code.require_index(w)? as usize;
        Ok(self.get(r, c))
    }

    pub fn is_normalized(&self) -> bool {
        (0..self.size()).all(|i| self.get(0, i) == 0 && self.get(i, 0) == 0)
    }

    pub fn write_to(&self, mut out: impl Write) -> Result<()> {
        out.write_all(&self.to_bytes())?;
        Ok(())
    }

    /// `CLT1` encoding: magic, `n` and `k` as one byte each, the `k` basis
    /// rows (`n` bits padded to bytes), then `2^k` rows of `2^k` bits. All
    /// bit rows are MSB first.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(6 + self.size() * self.size().div_ceil(8));
        out.extend_from_slice(TABLE_MAGIC);
        write_code_header(&self.code, &mut out);
        self.bits.write_msb(&mut out);
        out
    }

    pub fn read_from(mut input: impl Read) -> Result<Self> {
        let mut bytes = Vec::new();
        input.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        const FMT: &str = "CLT1";
        let rest = bytes
            .strip_prefix(TABLE_MAGIC.as_slice())
            .ok_or_else(|| Error::format(FMT, "bad magic"))?;
        let (code, rest) = read_code_header(rest, FMT)?;
        if code.dimension() > MAX_TABLE_DIM {
            return Err(Error::format(FMT, format!("dimension {} too large", code.dimension())));
        }
        let size = code.size();
        let bits = BitMatrix::read_msb(size, size, rest, FMT)?;
        code.span_bits()?;
        Ok(CocycleTable { code, bits })
    }
}

impl fmt::Debug for CocycleTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CocycleTable")
            .field("code", &self.code)
            .field("bits", &self.bits)
            .finish()
    }
}

pub(crate) fn write_basis_rows(basis: &[BitWord], out: &mut Vec<u8>) {
    for b in basis {
        out.extend(b.to_msb_bytes());
    }
}

pub(crate) fn read_basis_rows<'a>(
    n: usize,
    k: usize,
    bytes: &'a [u8],
    format: &'static str,
) -> Result<(Vec<BitWord>, &'a [u8])> {
    let row = n.div_ceil(8);
    if bytes.len() < row * k {
        return Err(Error::format(format, "truncated basis rows"));
    }
    let basis = bytes[..row * k]
        .chunks(row)
        .map(|r| BitWord::from_msb_bytes(n, r).map_err(|e| Error::format(format, e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    Ok((basis, &bytes[row * k..]))
}

fn write_code_header(code: &Code, out: &mut Vec<u8>) {
    out.push(code.length() as u8);
    out.push(code.dimension() as u8);
    write_basis_rows(code.basis(), out);
}

fn read_code_header<'a>(bytes: &'a [u8], format: &'static str) -> Result<(Code, &'a [u8])> {
    if bytes.len() < 2 {
        return Err(Error::format(format, "truncated header"));
    }
    let (n, k) = (bytes[0] as usize, bytes[1] as usize);
    let (basis, rest) = read_basis_rows(n, k, &bytes[2..], format)?;
    let code = Code::new(n, basis).map_err(|e| Error::format(format, e.to_string()))?;
    Ok((code, rest))
}

/// Builds a code cocycle by Griess's algorithm from the ordered basis of `code`.
///
/// Writing `V_i` for the span of `b_0..b_{i-1}` and `W_i = b_i + V_i`, step
/// `i` extends `theta` from `V_i x V_i` to `V_{i+1} x V_{i+1}` in four stages:
/// `{b_i} x V_i` and its transpose (D1), `{b_i} x W_i` and its transpose
/// (D2), `W_i x W_i` (D3), then `W_i x V_i` and `V_i x W_i` (D4). Every free
/// choice in D1 is `choice_bit`.
///
/// In canonical indexing `V_i` is the index range `0..2^i`, `b_i` is index
/// `2^i` and `b_i + v` is `2^i | v`, so the whole construction is index
/// arithmetic on the table.
pub fn griess_build(code: &Code, choice_bit: u8) -> Result<CocycleTable> {
    if code.dimension() == 0 {
        return Err(Error::InvalidArgument("griess_build needs a code of dimension >= 1".into()));
    }
    if let Some(why) = code.doubly_even_violation() {
        return Err(Error::NotDoublyEven(why));
    }
    let choice = choice_bit & 1;
    let mut t = CocycleTable::zeros(code.clone())?;
    let words: Vec<u64> = t.words().to_vec();
    let q = |i: usize| quarter(words[i].count_ones());
    let h = |i: usize, j: usize| half_and(words[i], words[j]);

    t.set(1, 1, q(1));

    for i in 1..code.dimension() {
        let bi = 1usize << i;
        let size = bi;

        // D1
        for v in 0..size {
            if v != 0 {
                t.set(bi, v, choice);
                t.set(v, bi, h(v, bi) ^ choice);
            } else {
                t.set(v, bi, h(v, bi));
            }
        }

        // D2
        let qb = q(bi);
        for v in 0..size {
            let tb = t.get(bi, v);
            t.set(bi, bi | v, qb ^ tb);
            t.set(bi | v, bi, h(bi, bi | v) ^ qb ^ tb);
        }

        // D3: theta(v1, b_i + w) with w = b_i + v2 is theta(v1, v2)
        for v1 in 0..size {
            let a = t.get(v1, bi);
            for v2 in 0..size {
                let w = bi | v2;
                let b = t.get(v1, v2);
                let c = t.get(w, bi);
                let r = h(v1, w) ^ a ^ b ^ c;
                if v1 == 0 {
                    debug_assert_eq!(t.get(w, bi), r, "D3 rewrote theta(w, b_i) at w={w}");
                }
                t.set(w, bi | v1, r);
            }
        }

        // D4
        for v1 in 0..size {
            for v2 in 0..size {
                let w = bi | v2;
                let a = t.get(w, v1 ^ w);
                let qw = q(w);
                if v1 == 0 {
                    assert_eq!(
                        qw ^ a,
                        0,
                        "stage consistency: theta(w, 0) must stay zero (w index {w})"
                    );
                }
                t.set(w, v1, qw ^ a);
                t.set(v1, w, h(v1, w) ^ qw ^ a);
            }
        }
    }
    Ok(t)
}

/// Left side minus right side of (I1) at canonical indices; zero when it holds.
#[inline]
pub(crate) fn cocycle_defect(t: &CocycleTable, u: usize, v: usize, w: usize) -> u8 {
    let words = t.words();
    t.get(v, w) ^ t.get(u ^ v, w) ^ t.get(u, v ^ w) ^ t.get(u, v) ^ twist_bits(words[u], words[v], words[w])
}

/// Left side of the untwisted cocycle identity.
#[inline]
pub(crate) fn group_defect(t: &CocycleTable, u: usize, v: usize, w: usize) -> u8 {
    t.get(v, w) ^ t.get(u ^ v, w) ^ t.get(u, v ^ w) ^ t.get(u, v)
}

#[inline]
pub(crate) fn symmetry_defect(t: &CocycleTable, v: usize, w: usize) -> u8 {
    let words = t.words();
    t.get(v, w) ^ t.get(w, v) ^ half_and(words[v], words[w])
}

#[inline]
pub(crate) fn diagonal_defect(t: &CocycleTable, v: usize) -> u8 {
    t.get(v, v) ^ quarter(t.words()[v].count_ones())
}

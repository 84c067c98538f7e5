//! A code cocycle kept only on `(V ∪ W)^2` for a split `C = V ⊕ W`.
//!
//! Any value is recovered from the stored blocks: with `c_i = v_i + w_i`,
//!
//! ```text
//! theta(v1+w1, v2+w2) = theta(v1,v2) + theta(w1,w2) + theta(v1,w1) + theta(w2,v2)
//!                     + theta(v1+v2, w1+w2) + |v2 & (w1+w2)|/2
//!                     + |v1 & v2 & (w1+w2)| + |w1 & w2 & v2| + |v1 & w1 & (v2+w2)|   (mod 2)
//! ```
//!
//! Every lookup on the right lands in `V x V`, `W x W`, `V x W` or `W x V`.
//! The reduced variant drops the `W x V` block and rewrites its one lookup
//! with the symmetry identity `theta(w,v) = theta(v,w) + |v & w|/2`.

use std::io::{Read, Write};

use serde::Serialize;

use crate::bitmatrix::BitMatrix;
use crate::cocycle::{read_basis_rows, write_basis_rows, CocycleTable};
use crate::code::Code;
use crate::error::{Error, Result};
use crate::word::{half_and, twist_bits, BitWord};

pub const FRAGMENT_MAGIC: &[u8; 4] = b"CLF1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleFragment {
    /// The whole code with basis `v_basis ++ w_basis`.
    code: Code,
    v: Code,
    w: Code,
    vv: BitMatrix,
    vw: BitMatrix,
    wv: Option<BitMatrix>,
    ww: BitMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BlockStats {
    pub rows: usize,
    pub cols: usize,
    pub ones: u64,
    pub all_zero: bool,
    /// Largest `d` with the block constant on every aligned `2^d x 2^d` tile.
    pub tile_exponent: u32,
}

impl BlockStats {
    fn of(m: &BitMatrix) -> Self {
        BlockStats {
            rows: m.rows(),
            cols: m.cols(),
            ones: m.count_ones(),
            all_zero: m.is_zero(),
            tile_exponent: tile_exponent(m),
        }
    }

    pub fn tile_size(&self) -> usize {
        1 << self.tile_exponent
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadrantStats {
    pub v_dim: usize,
    pub w_dim: usize,
    pub stored_values: u64,
    pub vv: BlockStats,
    pub vw: BlockStats,
    /// Absent for a reduced fragment.
    pub wv: Option<BlockStats>,
    pub ww: BlockStats,
}

/// Largest `d` such that `m` is constant on each aligned `2^d x 2^d` tile.
pub fn tile_exponent(m: &BitMatrix) -> u32 {
    let limit = m.rows().min(m.cols());
    let mut d = 0;
    while (2usize << d) <= limit && tiles_constant(m, 2 << d) {
        d += 1;
    }
    d
}

fn tiles_constant(m: &BitMatrix, tile: usize) -> bool {
    if !m.rows().is_multiple_of(tile) || !m.cols().is_multiple_of(tile) {
        return false;
    }
    (0..m.rows()).all(|r| (0..m.cols()).all(|c| m.get(r, c) == m.get(r - r % tile, c - c % tile)))
}

/// Stored-value count `(2^dimV + 2^dimW - 1)^2`: the zero word is shared by
/// both halves and counted once.
pub fn stored_value_count(v_dim: usize, w_dim: usize) -> u64 {
    let side = (1u64 << v_dim) + (1u64 << w_dim) - 1;
    side * side
}

impl CocycleFragment {
    /// Copies the four blocks of `theta` on `(V ∪ W)^2` out of a full table.
    pub fn compress(t: &CocycleTable, v_basis: &[BitWord], w_basis: &[BitWord]) -> Result<Self> {
        let full = t.code();
        for b in v_basis.iter().chain(w_basis) {
            if !full.contains(b) {
                return Err(Error::NotInCode(b.to_string()));
            }
        }
        let code = joint_code(full.length(), v_basis, w_basis)?;
        if code.dimension() != full.dimension() {
            return Err(Error::NotComplementary(format!(
                "dim V + dim W = {} but the code has dimension {}",
                code.dimension(),
                full.dimension()
            )));
        }
        let v = Code::new(full.length(), v_basis.to_vec())?;
        let w = Code::new(full.length(), w_basis.to_vec())?;
        let vi = table_indices(t, &v)?;
        let wi = table_indices(t, &w)?;
        let block = |rows: &[usize], cols: &[usize]| {
            let mut m = BitMatrix::zeros(rows.len(), cols.len());
            for (r, &ri) in rows.iter().enumerate() {
                for (c, &ci) in cols.iter().enumerate() {
                    m.set(r, c, t.get(ri, ci));
                }
            }
            m
        };
        Ok(CocycleFragment {
            vv: block(&vi, &vi),
            vw: block(&vi, &wi),
            wv: Some(block(&wi, &vi)),
            ww: block(&wi, &wi),
            code,
            v,
            w,
        })
    }

    /// Splits the table's own basis after the first `v_dim` vectors.
    pub fn compress_prefix(t: &CocycleTable, v_dim: usize) -> Result<Self> {
        let basis = t.code().basis();
        if v_dim > basis.len() {
            return Err(Error::InvalidArgument(format!(
                "V dimension {v_dim} exceeds code dimension {}",
                basis.len()
            )));
        }
        Self::compress(t, &basis[..v_dim], &basis[v_dim..])
    }

    /// The same fragment without its `W x V` block.
    pub fn reduced(&self) -> Self {
        CocycleFragment {
            wv: None,
            ..self.clone()
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.wv.is_none()
    }

    pub fn code(&self) -> &Code {
        &self.code
    }

    pub fn v_code(&self) -> &Code {
        &self.v
    }

    pub fn w_code(&self) -> &Code {
        &self.w
    }

    pub fn v_dim(&self) -> usize {
        self.v.dimension()
    }

    pub fn w_dim(&self) -> usize {
        self.w.dimension()
    }

    pub fn vv(&self) -> &BitMatrix {
        &self.vv
    }

    pub fn vw(&self) -> &BitMatrix {
        &self.vw
    }

    pub fn ww(&self) -> &BitMatrix {
        &self.ww
    }

    pub fn wv(&self) -> Option<&BitMatrix> {
        self.wv.as_ref()
    }

    /// The `W x V` block, rebuilt from `V x W` when it is not stored.
    pub fn wv_or_derived(&self) -> BitMatrix {
        if let Some(wv) = &self.wv {
            return wv.clone();
        }
        let (vs, ws) = (self.v_words(), self.w_words());
        let mut m = BitMatrix::zeros(ws.len(), vs.len());
        for (r, &w) in ws.iter().enumerate() {
            for (c, &v) in vs.iter().enumerate() {
                m.set(r, c, self.vw.get(c, r) ^ half_and(v, w));
            }
        }
        m
    }

    fn v_words(&self) -> &[u64] {
        self.v.span_bits().expect("fragment halves are enumerable")
    }

    fn w_words(&self) -> &[u64] {
        self.w.span_bits().expect("fragment halves are enumerable")
    }

    pub fn stored_values(&self) -> u64 {
        stored_value_count(self.v_dim(), self.w_dim())
    }

    /// Canonical `(V index, W index)` of a codeword.
    pub fn decompose(&self, c: &BitWord) -> Result<(usize, usize)> {
        let m = self.code.require_index(c)? as usize;
        Ok(self.split_index(m))
    }

    #[inline]
    fn split_index(&self, m: usize) -> (usize, usize) {
        (m & ((1 << self.v_dim()) - 1), m >> self.v_dim())
    }

    /// `theta(c1, c2)` reconstructed from the four stored blocks.
    pub fn evaluate(&self, c1: &BitWord, c2: &BitWord) -> Result<u8> {
        let wv = self.wv.as_ref().ok_or_else(|| {
            Error::InvalidArgument("fragment has no W x V block; use evaluate_reduced".into())
        })?;
        let (v1, w1) = self.decompose(c1)?;
        let (v2, w2) = self.decompose(c2)?;
        Ok(self.core_terms(v1, w1, v2, w2) ^ wv.get(w2, v2))
    }

    /// `theta(c1, c2)` from the `V x V`, `W x W` and `V x W` blocks only.
    pub fn evaluate_reduced(&self, c1: &BitWord, c2: &BitWord) -> Result<u8> {
        let (v1, w1) = self.decompose(c1)?;
        let (v2, w2) = self.decompose(c2)?;
        let wv = self.vw.get(v2, w2) ^ half_and(self.v_words()[v2], self.w_words()[w2]);
        Ok(self.core_terms(v1, w1, v2, w2) ^ wv)
    }

    /// Every term of the reconstruction except `theta(w2, v2)`.
    #[inline]
    fn core_terms(&self, v1: usize, w1: usize, v2: usize, w2: usize) -> u8 {
        let (vs, ws) = (self.v_words(), self.w_words());
        let (a1, a2, b1, b2) = (vs[v1], vs[v2], ws[w1], ws[w2]);
        let bsum = b1 ^ b2;
        self.vv.get(v1, v2)
            ^ self.ww.get(w1, w2)
            ^ self.vw.get(v1, w1)
            ^ self.vw.get(v1 ^ v2, w1 ^ w2)
            ^ half_and(a2, bsum)
            ^ twist_bits(a1, a2, bsum)
            ^ twist_bits(b1, b2, a2)
            ^ twist_bits(a1, b1, a2 ^ b2)
    }

    /// `theta` at canonical indices of the joint basis `v_basis ++ w_basis`.
    pub fn evaluate_index(&self, m1: usize, m2: usize) -> u8 {
        let (v1, w1) = self.split_index(m1);
        let (v2, w2) = self.split_index(m2);
        let wv = match &self.wv {
            Some(wv) => wv.get(w2, v2),
            None => self.vw.get(v2, w2) ^ half_and(self.v_words()[v2], self.w_words()[w2]),
        };
        self.core_terms(v1, w1, v2, w2) ^ wv
    }

    /// Rebuilds the full table, in canonical order of the joint basis.
    pub fn expand(&self) -> Result<CocycleTable> {
        CocycleTable::from_fn(self.code.clone(), |r, c| self.evaluate_index(r, c))
    }

    pub fn quadrant_stats(&self) -> QuadrantStats {
        QuadrantStats {
            v_dim: self.v_dim(),
            w_dim: self.w_dim(),
            stored_values: self.stored_values(),
            vv: BlockStats::of(&self.vv),
            vw: BlockStats::of(&self.vw),
            wv: self.wv.as_ref().map(BlockStats::of),
            ww: BlockStats::of(&self.ww),
        }
    }

    /// The 2x2 quadrant composite `[[VxV, VxW], [WxV, WxW]]`, of side
    /// `2^dimV + 2^dimW`. The zero row and column appear once per half.
    pub fn composite(&self) -> BitMatrix {
        let (nv, nw) = (self.v.size(), self.w.size());
        let wv = self.wv_or_derived();
        let mut m = BitMatrix::zeros(nv + nw, nv + nw);
        for r in 0..nv + nw {
            for c in 0..nv + nw {
                let bit = match (r < nv, c < nv) {
                    (true, true) => self.vv.get(r, c),
                    (true, false) => self.vw.get(r, c - nv),
                    (false, true) => wv.get(r - nv, c),
                    (false, false) => self.ww.get(r - nv, c - nv),
                };
                m.set(r, c, bit);
            }
        }
        m
    }

    /// `CLF1` encoding: magic, `n`, `dimV`, `dimW` (one byte each), the V
    /// rows then the W rows, then the blocks `V x V`, `V x W`, `W x V`,
    /// `W x W`, each row-major with MSB-first rows padded to bytes. Blocks
    /// include the zero row and column of each half, so the zero word's
    /// entries are stored redundantly. A reduced fragment writes its
    /// derived `W x V` block.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(FRAGMENT_MAGIC);
        out.push(self.code.length() as u8);
        out.push(self.v_dim() as u8);
        out.push(self.w_dim() as u8);
        write_basis_rows(self.code.basis(), &mut out);
        self.vv.write_msb(&mut out);
        self.vw.write_msb(&mut out);
        self.wv_or_derived().write_msb(&mut out);
        self.ww.write_msb(&mut out);
        out
    }

    pub fn write_to(&self, mut out: impl Write) -> Result<()> {
        out.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        const FMT: &str = "CLF1";
        let rest = bytes
            .strip_prefix(FRAGMENT_MAGIC.as_slice())
            .ok_or_else(|| Error::format(FMT, "bad magic"))?;
        if rest.len() < 3 {
            return Err(Error::format(FMT, "truncated header"));
        }
        let (n, dv, dw) = (rest[0] as usize, rest[1] as usize, rest[2] as usize);
        if dv > crate::cocycle::MAX_TABLE_DIM || dw > crate::cocycle::MAX_TABLE_DIM {
            return Err(Error::format(FMT, "half dimension too large"));
        }
        let (basis, rest) = read_basis_rows(n, dv + dw, &rest[3..], FMT)?;
        let (vb, wb) = basis.split_at(dv);
        let code = joint_code(n, vb, wb).map_err(|e| Error::format(FMT, e.to_string()))?;
        let v = Code::new(n, vb.to_vec())?;
        let w = Code::new(n, wb.to_vec())?;
        let (nv, nw) = (v.size(), w.size());
        let row = |cols: usize| cols.div_ceil(8);
        let sizes = [nv * row(nv), nv * row(nw), nw * row(nv), nw * row(nw)];
        if rest.len() != sizes.iter().sum::<usize>() {
            return Err(Error::format(FMT, "block data has the wrong length"));
        }
        let (vv_b, rest) = rest.split_at(sizes[0]);
        let (vw_b, rest) = rest.split_at(sizes[1]);
        let (wv_b, ww_b) = rest.split_at(sizes[2]);
        let frag = CocycleFragment {
            vv: BitMatrix::read_msb(nv, nv, vv_b, FMT)?,
            vw: BitMatrix::read_msb(nv, nw, vw_b, FMT)?,
            wv: Some(BitMatrix::read_msb(nw, nv, wv_b, FMT)?),
            ww: BitMatrix::read_msb(nw, nw, ww_b, FMT)?,
            code,
            v,
            w,
        };
        frag.v.span_bits()?;
        frag.w.span_bits()?;
        Ok(frag)
    }

    pub fn read_from(mut input: impl Read) -> Result<Self> {
        let mut bytes = Vec::new();
        input.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }
}

fn joint_code(n: usize, v_basis: &[BitWord], w_basis: &[BitWord]) -> Result<Code> {
    let joint: Vec<BitWord> = v_basis.iter().chain(w_basis).copied().collect();
    Code::new(n, joint).map_err(|e| match e {
        Error::DependentBasis { index } => Error::NotComplementary(format!(
            "V and W bases are jointly dependent at vector {index}"
        )),
        other => other,
    })
}

fn table_indices(t: &CocycleTable, half: &Code) -> Result<Vec<usize>> {
    half.span_bits()?
        .iter()
        .map(|&b| {
            t.code()
                .index_of_bits(b)
                .map(|i| i as usize)
                .ok_or_else(|| Error::NotInCode(format!("{b:#x}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::hamming84;
    use crate::cocycle::griess_build;

    fn hamming_table() -> CocycleTable {
        griess_build(&hamming84().unwrap(), 0).unwrap()
    }

    #[test]
    fn storage_formula() {
        assert_eq!(stored_value_count(6, 6), 16_129);
        assert_eq!(stored_value_count(2, 2), 49);
        assert_eq!(stored_value_count(4, 0), 256);
    }

    #[test]
    fn v_only_input_reads_vv() {
        let t = hamming_table();
        let f = CocycleFragment::compress_prefix(&t, 2).unwrap();
        let words = t.code().enumerate().unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(f.evaluate(&words[a], &words[b]).unwrap(), f.vv().get(a, b));
            }
        }
    }

    #[test]
    fn hamming_split_reconstructs_everything() {
        let t = hamming_table();
        let f = CocycleFragment::compress_prefix(&t, 2).unwrap();
        let r = f.reduced();
        let words = t.code().enumerate().unwrap();
        for (i, a) in words.iter().enumerate() {
            for (j, b) in words.iter().enumerate() {
                assert_eq!(f.evaluate(a, b).unwrap(), t.get(i, j), "({i},{j})");
                assert_eq!(r.evaluate_reduced(a, b).unwrap(), t.get(i, j));
            }
        }
        assert!(r.evaluate(&words[1], &words[2]).is_err());
        assert_eq!(f.expand().unwrap(), t);
    }

    #[test]
    fn degenerate_split_is_the_full_table() {
        let t = hamming_table();
        let f = CocycleFragment::compress_prefix(&t, 4).unwrap();
        assert_eq!(f.vv(), t.bits());
        assert_eq!(f.stored_values(), 256);
    }

    #[test]
    fn non_complementary_rejected() {
        let t = hamming_table();
        let b = t.code().basis();
        let overlap = b[0].add(&b[1]).unwrap();
        let err = CocycleFragment::compress(&t, &b[..2], &[overlap, b[2]]).unwrap_err();
        assert!(matches!(err, Error::NotComplementary(_)));
        let err = CocycleFragment::compress(&t, &b[..2], &b[2..3]).unwrap_err();
        assert!(matches!(err, Error::NotComplementary(_)));
        let outside = BitWord::parse_bits("10000000").unwrap();
        assert!(matches!(
            CocycleFragment::compress(&t, &[outside], &b[1..]),
            Err(Error::NotInCode(_))
        ));
    }

    #[test]
    fn tile_exponents() {
        let mut m = BitMatrix::zeros(8, 8);
        assert_eq!(tile_exponent(&m), 3);
        for r in 4..8 {
            for c in 0..4 {
                m.set(r, c, 1);
            }
        }
        assert_eq!(tile_exponent(&m), 2);
        m.flip(0, 1);
        assert_eq!(tile_exponent(&m), 0);
    }

    #[test]
    fn clf1_round_trip() {
        let t = hamming_table();
        let f = CocycleFragment::compress_prefix(&t, 2).unwrap();
        let bytes = f.to_bytes();
        assert_eq!(&bytes[..7], &[b'C', b'L', b'F', b'1', 8, 2, 2]);
        assert_eq!(bytes.len(), 7 + 4 + 4 * 4);
        assert_eq!(CocycleFragment::from_bytes(&bytes).unwrap(), f);
        assert_eq!(f.reduced().to_bytes(), bytes);
        assert!(CocycleFragment::from_bytes(&bytes[..bytes.len() - 1]).is_err());
    }

    #[test]
    fn composite_layout() {
        let t = hamming_table();
        let f = CocycleFragment::compress_prefix(&t, 2).unwrap();
        let m = f.composite();
        assert_eq!(m.rows(), 8);
        assert_eq!(m.get(0, 5), f.vw().get(0, 1));
        assert_eq!(m.get(6, 1), f.wv().unwrap().get(2, 1));
        assert_eq!(m.get(7, 7), f.ww().get(3, 3));
        assert_eq!(f.reduced().composite(), m);
    }
}

//! Binary linear codes given by an ordered basis.
//!
//! The canonical enumeration of a code puts at index `m` the sum of the basis
//! vectors `b_j` for which bit `j` of `m` is set, so the first basis vector is
//! the least significant: `0, b1, b2, b1+b2, b3, ...`. Every table, file and
//! image in this crate is indexed this way, and `index -> word` is a group
//! isomorphism from `(F_2)^k` under XOR.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::word::BitWord;

/// Largest dimension for which the span may be listed.
pub const MAX_ENUMERATE_DIM: usize = 26;

#[derive(Clone)]
pub struct Code {
    length: usize,
    basis: Vec<BitWord>,
    coords: CoordinateMap,
    span: OnceLock<Vec<u64>>,
}

impl Code {
    /// Validates the ordered basis by Gaussian elimination. Dependent input
    /// is rejected rather than reduced, since the cocycle built from a code
    /// depends on the exact ordered basis.
    pub fn new(length: usize, basis: Vec<BitWord>) -> Result<Self> {
        if length == 0 || length > crate::word::MAX_LENGTH {
            return Err(Error::BadLength(length));
        }
        if let Some(bad) = basis.iter().find(|b| b.len() != length) {
            return Err(Error::LengthMismatch {
                left: bad.len(),
                right: length,
            });
        }
        let raw: Vec<u64> = basis.iter().map(BitWord::bits).collect();
        let coords = CoordinateMap::new(length, &raw)?;
        Ok(Code {
            length,
            basis,
            coords,
            span: OnceLock::new(),
        })
    }

    /// Code from bitstring rows; the ambient length is taken from the first row.
    pub fn from_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let basis = rows
            .iter()
            .map(|r| BitWord::parse_bits(r.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let length = basis
            .first()
            .map(BitWord::len)
            .ok_or_else(|| Error::InvalidArgument("empty basis needs an explicit length".into()))?;
        Self::new(length, basis)
    }

    /// Parses the text format: a line `n k`, then `k` rows of `n` characters
    /// from `{0,1}`. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing 'n k' header".into()))?;
        let mut fields = header.split_whitespace();
        let mut num = |what: &str| -> Result<usize> {
            fields
                .next()
                .ok_or_else(|| Error::Parse(format!("header is missing {what}")))?
                .parse()
                .map_err(|e| Error::Parse(format!("bad {what} in header: {e}")))
        };
        let n = num("n")?;
        let k = num("k")?;
        let rows: Vec<&str> = lines.collect();
        if rows.len() != k {
            return Err(Error::Parse(format!("header says {k} rows, found {}", rows.len())));
        }
        let basis = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let w = BitWord::parse_bits(r)?;
                if w.len() != n {
                    return Err(Error::Parse(format!(
                        "row {} has {} characters, expected {n}",
                        i + 1,
                        w.len()
                    )));
                }
                Ok(w)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, basis)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.length, self.dimension());
        for b in &self.basis {
            out.push_str(&b.to_string());
            out.push('\n');
        }
        out
    }

    #[inline]
    pub fn length(&self) -> usize {
        self.length
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BitWord] {
        &self.basis
    }

    /// Number of codewords, `2^k`.
    pub fn size(&self) -> usize {
        1usize << self.dimension()
    }

    /// The span in canonical order as raw packed words.
    pub fn span_bits(&self) -> Result<&[u64]> {
        if self.dimension() > MAX_ENUMERATE_DIM {
            return Err(Error::Capacity(format!(
                "cannot enumerate a code of dimension {} (limit {MAX_ENUMERATE_DIM})",
                self.dimension()
            )));
        }
        Ok(self.span.get_or_init(|| {
            let mut span = Vec::with_capacity(self.size());
            span.push(0u64);
            for b in &self.basis {
                let half = span.len();
                for m in 0..half {
                    span.push(span[m] ^ b.bits());
                }
            }
            span
        }))
    }

    /// The span in canonical order.
    pub fn enumerate(&self) -> Result<Vec<BitWord>> {
        Ok(self
            .span_bits()?
            .iter()
            .map(|&b| self.word_unchecked(b))
            .collect())
    }

    /// Codeword at canonical index `index`, computed from the basis.
    pub fn word_at(&self, index: u64) -> Result<BitWord> {
        if self.dimension() < 64 && index >> self.dimension() != 0 {
            return Err(Error::InvalidArgument(format!(
                "index {index} out of range for a code of dimension {}",
                self.dimension()
            )));
        }
        let bits = self
            .basis
            .iter()
            .enumerate()
            .filter(|(j, _)| index >> j & 1 == 1)
            .fold(0u64, |acc, (_, b)| acc ^ b.bits());
        Ok(self.word_unchecked(bits))
    }

    /// Canonical index of `word`, or `None` if it is not a codeword.
    pub fn index_of(&self, word: &BitWord) -> Option<u64> {
        if word.len() != self.length {
            return None;
        }
        self.coords.index_of(word.bits())
    }

    pub(crate) fn index_of_bits(&self, bits: u64) -> Option<u64> {
        self.coords.index_of(bits)
    }

    pub fn require_index(&self, word: &BitWord) -> Result<u64> {
        self.index_of(word)
            .ok_or_else(|| Error::NotInCode(word.to_string()))
    }

    pub fn contains(&self, word: &BitWord) -> bool {
        self.index_of(word).is_some()
    }

    pub(crate) fn word_unchecked(&self, bits: u64) -> BitWord {
        BitWord::new(self.length, bits).expect("packed word fits the code length")
    }

    /// Doubly-even test by the basis criterion: every `|b_i|` divisible by
    /// four and every `|b_i & b_j|` even. This is equivalent to checking all
    /// `2^k` weights because `|v + w| = |v| + |w| - 2|v & w|`.
    pub fn is_doubly_even(&self) -> bool {
        self.doubly_even_violation().is_none()
    }

    pub(crate) fn doubly_even_violation(&self) -> Option<String> {
        for (i, b) in self.basis.iter().enumerate() {
            if b.weight() % 4 != 0 {
                return Some(format!("basis vector {i} has weight {}", b.weight()));
            }
            for (j, c) in self.basis.iter().enumerate().skip(i + 1) {
                let w = (b.bits() & c.bits()).count_ones();
                if w % 2 != 0 {
                    return Some(format!("basis vectors {i} and {j} overlap in {w} positions"));
                }
            }
        }
        None
    }

    /// Doubly-even test by listing every codeword weight.
    pub fn is_doubly_even_exhaustive(&self) -> Result<bool> {
        Ok(self.span_bits()?.iter().all(|w| w.count_ones() % 4 == 0))
    }

    /// The same code with its basis in a new order or under an invertible
    /// change of basis; the new rows must span the same space.
    pub fn rebased(&self, basis: Vec<BitWord>) -> Result<Code> {
        let code = Code::new(self.length, basis)?;
        if code.dimension() != self.dimension() || !code.basis.iter().all(|b| self.contains(b)) {
            return Err(Error::InvalidArgument(
                "new basis does not span the same code".into(),
            ));
        }
        Ok(code)
    }

    /// The subcode spanned by `basis`, which must lie in this code.
    pub fn subcode(&self, basis: Vec<BitWord>) -> Result<Code> {
        if let Some(w) = basis.iter().find(|b| !self.contains(b)) {
            return Err(Error::NotInCode(w.to_string()));
        }
        Code::new(self.length, basis)
    }
}

impl PartialEq for Code {
    fn eq(&self, other: &Self) -> bool {
        self.length == other.length && self.basis == other.basis
    }
}

impl Eq for Code {}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Code")
            .field("length", &self.length)
            .field("basis", &self.basis)
            .finish()
    }
}

/// Linear map from `(F_2)^n` to (canonical index, residue), precomputed as
/// one 256-entry table per input byte.
///
/// After reducing the basis to row echelon form with every pivot column
/// cleared in all other rows, whether a pivot row is used to reduce a word
/// depends only on that word's pivot bit. Both outputs are then linear in
/// the input word, so they are XORs of per-byte contributions. A word is a
/// codeword iff its residue is zero, and then the index gives its
/// coordinates with respect to the original ordered basis.
#[derive(Clone)]
pub(crate) struct CoordinateMap {
    nbytes: usize,
    table: Vec<(u64, u64)>,
}

impl CoordinateMap {
    pub(crate) fn new(length: usize, basis: &[u64]) -> Result<Self> {
        // rows: (reduced word, combination of original basis vectors), with pivot bit
        let mut rows: Vec<(u64, u64, u32)> = Vec::with_capacity(basis.len());
        for (i, &b) in basis.iter().enumerate() {
            let mut word = b;
            let mut combo = 1u64 << i;
            for &(r, c, p) in &rows {
                if word >> p & 1 == 1 {
                    word ^= r;
                    combo ^= c;
                }
            }
            if word == 0 {
                return Err(Error::DependentBasis { index: i });
            }
            let pivot = 63 - word.leading_zeros();
            for row in rows.iter_mut() {
                if row.0 >> pivot & 1 == 1 {
                    row.0 ^= word;
                    row.1 ^= combo;
                }
            }
            rows.push((word, combo, pivot));
        }

        let nbytes = length.div_ceil(8);
        let mut table = vec![(0u64, 0u64); nbytes * 256];
        for byte in 0..nbytes {
            for value in 0..256u64 {
                let part = value << (8 * byte);
                let (mut idx, mut residue) = (0u64, part);
                for &(r, c, p) in &rows {
                    if part >> p & 1 == 1 {
                        residue ^= r;
                        idx ^= c;
                    }
                }
                table[byte * 256 + value as usize] = (idx, residue);
            }
        }
        Ok(CoordinateMap { nbytes, table })
    }

    #[inline]
    pub(crate) fn index_of(&self, bits: u64) -> Option<u64> {
        let (mut idx, mut residue) = (0u64, 0u64);
        for byte in 0..self.nbytes {
            let (i, r) = self.table[byte * 256 + ((bits >> (8 * byte)) & 0xff) as usize];
            idx ^= i;
            residue ^= r;
        }
        (residue == 0).then_some(idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hamming() -> Code {
        Code::from_rows(&["10000111", "01001011", "00101101", "00011110"]).unwrap()
    }

    #[test]
    fn canonical_order_small() {
        let c = Code::from_rows(&["1100", "0110"]).unwrap();
        let words: Vec<String> = c.enumerate().unwrap().iter().map(|w| w.to_string()).collect();
        assert_eq!(words, ["0000", "1100", "0110", "1010"]);
        let single = Code::from_rows(&["1111"]).unwrap();
        assert_eq!(single.enumerate().unwrap().len(), 2);
    }

    #[test]
    fn hamming_last_index_is_sum_of_rows() {
        let words = hamming().enumerate().unwrap();
        assert_eq!(words.len(), 16);
        // 10000111 ^ 01001011 ^ 00101101 ^ 00011110 = 11111111
        assert_eq!(words[15].to_string(), "11111111");
    }

    #[test]
    fn index_of_round_trips() {
        let c = hamming();
        for (i, w) in c.enumerate().unwrap().iter().enumerate() {
            assert_eq!(c.index_of(w), Some(i as u64));
            assert_eq!(c.word_at(i as u64).unwrap(), *w);
        }
        assert_eq!(c.index_of(&BitWord::parse_bits("10000000").unwrap()), None);
    }

    #[test]
    fn dependent_basis_rejected() {
        let err = Code::from_rows(&["1100", "0110", "1010"]).unwrap_err();
        assert!(matches!(err, Error::DependentBasis { index: 2 }));
        assert!(matches!(
            Code::from_rows(&["0000"]).unwrap_err(),
            Error::DependentBasis { index: 0 }
        ));
    }

    #[test]
    fn doubly_even_examples() {
        assert!(hamming().is_doubly_even());
        let c = Code::from_rows(&["11000000"]).unwrap();
        assert!(!c.is_doubly_even());
        assert!(!c.is_doubly_even_exhaustive().unwrap());
        // weights divisible by 4 but odd overlap
        let c = Code::from_rows(&["11110000", "10001110"]).unwrap();
        assert!(!c.is_doubly_even());
        assert!(!c.is_doubly_even_exhaustive().unwrap());
    }

    #[test]
    fn parse_text_format() {
        let text = "8 4\n10000111\n01001011\n00101101\n00011110\n";
        let c = Code::parse(text).unwrap();
        assert_eq!(c, hamming());
        assert_eq!(Code::parse(&c.to_text()).unwrap(), c);
        assert!(Code::parse("8 2\n10000111\n").is_err());
        assert!(Code::parse("8 1\n1000011\n").is_err());
        assert!(Code::parse("").is_err());
    }

    #[test]
    fn zero_dimensional_code() {
        let c = Code::new(8, vec![]).unwrap();
        assert_eq!(c.size(), 1);
        assert_eq!(c.enumerate().unwrap(), vec![BitWord::zero(8).unwrap()]);
        assert!(c.is_doubly_even());
    }

    #[test]
    fn enumerate_capacity() {
        let basis = (0..27)
            .map(|i| BitWord::new(40, 1u64 << i).unwrap())
            .collect();
        let c = Code::new(40, basis).unwrap();
        assert!(matches!(c.enumerate(), Err(Error::Capacity(_))));
        // index lookup still works without enumeration
        let w = BitWord::new(40, (1 << 26) | 1).unwrap();
        assert_eq!(c.index_of(&w), Some((1 << 26) | 1));
    }

    #[test]
    fn rebased_requires_same_span() {
        let c = hamming();
        let mut b = c.basis().to_vec();
        b.swap(0, 1);
        assert!(c.rebased(b).is_ok());
        let other = vec![BitWord::parse_bits("11110000").unwrap()];
        assert!(c.rebased(other).is_err());
    }
}

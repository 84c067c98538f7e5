//! The loop `F_2 x_theta C` with product `(s,v)(t,w) = (s + t + theta(v,w), v + w)`.
//!
//! Loops are never stored as multiplication tables; every product is one
//! table lookup. Internally an element `(s, v)` is the id `2 * index(v) + s`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::builtin::q8_cocycle;
use crate::cocycle::{CocycleTable, MAX_TABLE_DIM};
use crate::code::Code;
use crate::error::{Error, Result};
use crate::verify::{rng, scan, Identity, Mode, VerificationReport};
use crate::word::{twist_bits, BitWord};

/// Moufang triples are scanned exhaustively only for loops up to this order.
pub const MAX_EXHAUSTIVE_MOUFANG_ORDER: usize = 64;

/// Codeword triples are scanned exhaustively for associativity only up to
/// this code dimension (`2^24` triples).
pub const MAX_EXHAUSTIVE_ASSOC_DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LoopElement {
    pub sign: u8,
    pub word: BitWord,
}

impl LoopElement {
    pub fn new(sign: u8, word: BitWord) -> Self {
        LoopElement { sign: sign & 1, word }
    }
}

impl fmt::Display for LoopElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.sign, self.word)
    }
}

#[derive(Debug, Clone)]
pub struct CodeLoop {
    table: CocycleTable,
}

impl CodeLoop {
    /// The table must be normalized so that `(0, 0)` is a two-sided identity.
    pub fn new(table: CocycleTable) -> Result<Self> {
        if !table.is_normalized() {
            return Err(Error::InvalidArgument(
                "cocycle is not normalized: theta(0,v) or theta(v,0) is nonzero".into(),
            ));
        }
        Ok(CodeLoop { table })
    }

    pub fn table(&self) -> &CocycleTable {
        &self.table
    }

    pub fn code(&self) -> &Code {
        self.table.code()
    }

    /// `2^(k+1)`.
    pub fn order(&self) -> usize {
        2 * self.table.size()
    }

    pub fn identity(&self) -> LoopElement {
        LoopElement::new(0, self.code().word_unchecked(0))
    }

    pub fn element(&self, sign: u8, word: BitWord) -> Result<LoopElement> {
        self.code().require_index(&word)?;
        Ok(LoopElement::new(sign, word))
    }

    pub fn elements(&self) -> impl Iterator<Item = LoopElement> + '_ {
        (0..self.order()).map(|id| self.element_at(id))
    }

    pub(crate) fn id_of(&self, a: &LoopElement) -> Result<usize> {
        let idx = self.code().require_index(&a.word)? as usize;
        Ok(idx << 1 | a.sign as usize)
    }

    pub(crate) fn element_at(&self, id: usize) -> LoopElement {
        LoopElement::new((id & 1) as u8, self.code().word_unchecked(self.table.words()[id >> 1]))
    }

    #[inline]
    pub(crate) fn mul_id(&self, a: usize, b: usize) -> usize {
        let (i, j) = (a >> 1, b >> 1);
        let sign = (a ^ b) & 1 ^ self.table.get(i, j) as usize;
        (i ^ j) << 1 | sign
    }

    pub fn multiply(&self, a: &LoopElement, b: &LoopElement) -> Result<LoopElement> {
        let (x, y) = (self.id_of(a)?, self.id_of(b)?);
        Ok(self.element_at(self.mul_id(x, y)))
    }

    /// Two-sided inverse `(s + theta(v,v), v)`.
    pub fn inverse(&self, a: &LoopElement) -> Result<LoopElement> {
        let id = self.id_of(a)?;
        Ok(self.element_at(self.inv_id(id)))
    }

    #[inline]
    pub(crate) fn inv_id(&self, a: usize) -> usize {
        let i = a >> 1;
        a ^ self.table.get(i, i) as usize
    }

    /// Smallest `n >= 1` with `a^n = e`.
    pub fn element_order(&self, a: &LoopElement) -> Result<u32> {
        let id = self.id_of(a)?;
        Ok(self.order_of_id(id))
    }

    fn order_of_id(&self, a: usize) -> u32 {
        let mut p = a;
        let mut n = 1;
        while p != 0 {
            p = self.mul_id(p, a);
            n += 1;
        }
        n
    }

    /// Histogram of element orders.
    pub fn order_statistics(&self) -> BTreeMap<u32, usize> {
        let mut counts = BTreeMap::new();
        for id in 0..self.order() {
            *counts.entry(self.order_of_id(id)).or_insert(0) += 1;
        }
        counts
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul_id(a, b) == self.mul_id(b, a)))
    }

    /// Canonical indices in this loop's code of the words of `sub_basis`.
    fn parent_indices(&self, sub_basis: &[BitWord]) -> Result<Vec<usize>> {
        sub_basis
            .iter()
            .map(|w| self.code().require_index(w).map(|i| i as usize))
            .collect()
    }

    /// The subloop lying over the subspace spanned by `sub_basis`, as a code
    /// loop in its own right with canonical order taken from `sub_basis`.
    pub fn restrict(&self, sub_basis: &[BitWord]) -> Result<CodeLoop> {
        let sub = self.code().subcode(sub_basis.to_vec())?;
        let map = span_indices(&self.parent_indices(sub_basis)?);
        let table = CocycleTable::from_fn(sub, |r, c| self.table.get(map[r], map[c]))?;
        CodeLoop::new(table)
    }

    /// Classifies the subloop over `span(sub_basis)` by algebraic criteria:
    /// it is associative iff `|u & v & w|` is even on the subspace (the
    /// twist is trilinear, so basis triples suffice), and it is the direct
    /// product `F_2 x U` iff `theta` vanishes on `U x U`.
    pub fn classify_subspace(&self, sub_basis: &[BitWord]) -> Result<SubloopReport> {
        let sub = self.code().subcode(sub_basis.to_vec())?;
        if sub.dimension() > MAX_TABLE_DIM {
            return Err(Error::Capacity(format!("subspace dimension {}", sub.dimension())));
        }
        let map = span_indices(&self.parent_indices(sub_basis)?);
        let is_associative = twist_vanishes(sub_basis);
        let splits = map
            .iter()
            .all(|&r| map.iter().all(|&c| self.table.get(r, c) == 0));
        Ok(SubloopReport {
            basis: sub_basis.to_vec(),
            order: 2u64 << sub.dimension(),
            is_associative,
            splits_as_direct_product: splits,
            is_elementary_abelian: splits && is_associative,
        })
    }

    /// Whether `span(factor) + span(complement)` carries the direct product
    /// `(F_2)^d x (loop over span(complement))`, i.e. whether
    /// `theta(a + u, b + u') = theta(u, u')` for all `a, b` in `span(factor)`
    /// and `u, u'` in `span(complement)`. In canonical order of the joint
    /// basis (factor first) this says the table is constant on aligned
    /// `2^d x 2^d` blocks.
    pub fn is_central_direct_factor(&self, factor: &[BitWord], complement: &[BitWord]) -> Result<bool> {
        let joint: Vec<BitWord> = factor.iter().chain(complement).copied().collect();
        let sub = self.code().subcode(joint.clone())?;
        if sub.dimension() > MAX_TABLE_DIM {
            return Err(Error::Capacity(format!("subspace dimension {}", sub.dimension())));
        }
        let map = span_indices(&self.parent_indices(&joint)?);
        let d = factor.len();
        let low = (1usize << d) - 1;
        Ok((0..map.len()).all(|r| {
            (0..map.len()).all(|c| self.table.get(map[r], map[c]) == self.table.get(map[r & !low], map[c & !low]))
        }))
    }
}

/// Parent indices of the span of words with the given parent indices, in
/// canonical order of that list.
fn span_indices(basis_idx: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &b in basis_idx {
        let n = out.len();
        for m in 0..n {
            out.push(out[m] ^ b);
        }
    }
    out
}

/// `|u & v & w|` even for every triple of basis vectors, with repetition.
pub fn twist_vanishes(basis: &[BitWord]) -> bool {
    let bits: Vec<u64> = basis.iter().map(BitWord::bits).collect();
    (0..bits.len()).all(|i| {
        (i..bits.len()).all(|j| (j..bits.len()).all(|l| twist_bits(bits[i], bits[j], bits[l]) == 0))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubloopReport {
    #[serde(serialize_with = "words_as_strings")]
    pub basis: Vec<BitWord>,
    pub order: u64,
    pub is_associative: bool,
    pub splits_as_direct_product: bool,
    pub is_elementary_abelian: bool,
}

fn words_as_strings<S: Serializer>(words: &[BitWord], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(words.iter().map(|w| w.to_string()))
}

impl SubloopReport {
    /// One-line text record.
    pub fn to_line(&self) -> String {
        let basis: Vec<String> = self.basis.iter().map(|w| w.to_string()).collect();
        format!(
            "order={} associative={} direct_product={} elementary_abelian={} basis=[{}]",
            self.order,
            self.is_associative,
            self.splits_as_direct_product,
            self.is_elementary_abelian,
            basis.join(",")
        )
    }
}

impl fmt::Display for SubloopReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

/// `x(y(xz)) = ((xy)x)z` over element triples.
pub fn check_moufang(l: &CodeLoop, mode: Mode) -> Result<VerificationReport> {
    if mode == Mode::Exhaustive && l.order() > MAX_EXHAUSTIVE_MOUFANG_ORDER {
        return Err(Error::Capacity(format!(
            "exhaustive Moufang scan needs order <= {MAX_EXHAUSTIVE_MOUFANG_ORDER}, loop has order {}",
            l.order()
        )));
    }
    let mut rep = VerificationReport::new(Identity::Moufang, mode);
    scan(l.order(), mode, |[x, y, z]| {
        let left = l.mul_id(x, l.mul_id(y, l.mul_id(x, z)));
        let right = l.mul_id(l.mul_id(l.mul_id(x, y), x), z);
        rep.record(left != right, || vec![x as u64, y as u64, z as u64]);
    });
    Ok(rep)
}

/// `(ab)c = a(bc)` over codeword triples. Signs cancel from both sides, so
/// the scan runs over `(F_2)^k` triples of canonical indices.
pub fn check_associativity(l: &CodeLoop, mode: Mode) -> Result<VerificationReport> {
    if mode == Mode::Exhaustive && l.code().dimension() > MAX_EXHAUSTIVE_ASSOC_DIM {
        return Err(Error::Capacity(format!(
            "exhaustive associativity scan needs dimension <= {MAX_EXHAUSTIVE_ASSOC_DIM}, loop has {}",
            l.code().dimension()
        )));
    }
    let mut rep = VerificationReport::new(Identity::Associativity, mode);
    scan(l.table.size(), mode, |[u, v, w]| {
        let (a, b, c) = (u << 1, v << 1, w << 1);
        let left = l.mul_id(l.mul_id(a, b), c);
        let right = l.mul_id(a, l.mul_id(b, c));
        rep.record(left != right, || vec![u as u64, v as u64, w as u64]);
    });
    Ok(rep)
}

/// Left and right translations by every element are permutations.
pub fn check_translations(l: &CodeLoop) -> Result<VerificationReport> {
    if l.order() > MAX_EXHAUSTIVE_MOUFANG_ORDER {
        return Err(Error::Capacity(format!(
            "translation scan needs order <= {MAX_EXHAUSTIVE_MOUFANG_ORDER}"
        )));
    }
    let n = l.order();
    let mut rep = VerificationReport::new(Identity::Translations, Mode::Exhaustive);
    for z in 0..n {
        let mut right = vec![false; n];
        let mut left = vec![false; n];
        for x in 0..n {
            right[l.mul_id(x, z)] = true;
            left[l.mul_id(z, x)] = true;
        }
        rep.record(!right.iter().all(|&b| b) || !left.iter().all(|&b| b), || vec![z as u64]);
    }
    Ok(rep)
}

/// `a a^-1 = a^-1 a = e` for every element.
pub fn check_inverses(l: &CodeLoop) -> VerificationReport {
    let mut rep = VerificationReport::new(Identity::Inverses, Mode::Exhaustive);
    for a in 0..l.order() {
        let inv = l.inv_id(a);
        rep.record(l.mul_id(a, inv) != 0 || l.mul_id(inv, a) != 0, || vec![a as u64]);
    }
    rep
}

/// `x(xx) = (xx)x` for every element.
pub fn check_diassociativity(l: &CodeLoop) -> VerificationReport {
    let mut rep = VerificationReport::new(Identity::Diassociativity, Mode::Exhaustive);
    for x in 0..l.order() {
        let xx = l.mul_id(x, x);
        rep.record(l.mul_id(x, xx) != l.mul_id(xx, x), || vec![x as u64]);
    }
    rep
}

/// Uniform random element, for sampling outside [`check_moufang`].
pub fn random_elements(l: &CodeLoop, count: usize, seed: u64) -> Vec<LoopElement> {
    use rand::Rng;
    let mut r = rng(seed);
    (0..count).map(|_| l.element_at(r.random_range(0..l.order()))).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Q8Report {
    pub order: usize,
    pub associative: bool,
    pub associativity_triples: u64,
    pub nonabelian: bool,
    /// Element order -> number of elements of that order.
    pub order_counts: BTreeMap<u32, usize>,
    /// Signs of `(0,10)(0,01)` and `(0,01)(0,10)`.
    pub ij_sign: u8,
    pub ji_sign: u8,
}

impl Q8Report {
    /// Order 8, associative, nonabelian, one element of order 2 and six of order 4.
    pub fn is_q8_signature(&self) -> bool {
        self.order == 8
            && self.associative
            && self.nonabelian
            && self.order_counts.get(&1) == Some(&1)
            && self.order_counts.get(&2) == Some(&1)
            && self.order_counts.get(&4) == Some(&6)
    }
}

/// Extends `V_4` by the built-in cocycle `d` and reports the quaternion group signature.
pub fn q8_demo() -> Result<Q8Report> {
    let l = CodeLoop::new(q8_cocycle())?;
    let assoc = check_associativity(&l, Mode::Exhaustive)?;
    let i = l.element(0, BitWord::parse_bits("10")?)?;
    let j = l.element(0, BitWord::parse_bits("01")?)?;
    Ok(Q8Report {
        order: l.order(),
        associative: assoc.pass,
        associativity_triples: assoc.checked,
        nonabelian: !l.is_commutative(),
        order_counts: l.order_statistics(),
        ij_sign: l.multiply(&i, &j)?.sign,
        ji_sign: l.multiply(&j, &i)?.sign,
    })
}

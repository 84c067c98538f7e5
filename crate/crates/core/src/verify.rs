//! Checks of the defining identities of a code cocycle, exhaustive or on a
//! seeded random sample.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cocycle::{cocycle_defect, diagonal_defect, group_defect, symmetry_defect, CocycleTable};
use crate::error::{Error, Result};

/// At most this many witnesses are kept in a report.
pub const MAX_WITNESSES: usize = 16;

/// The twisted cocycle identity is scanned exhaustively only up to this
/// code dimension (`2^18` triples).
pub const MAX_EXHAUSTIVE_TRIPLE_DIM: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

impl Mode {
    pub fn sampled(count: u64, seed: u64) -> Self {
        Mode::Sampled { count, seed }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exhaustive => write!(f, "exhaustive"),
            Mode::Sampled { count, seed } => write!(f, "sampled(count={count}, seed={seed})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    TwistedCocycle,
    Symmetry,
    Diagonal,
    Normalization,
    GroupCocycle,
    Moufang,
    Associativity,
    Translations,
    Inverses,
    Diassociativity,
}

impl Identity {
    pub fn label(&self) -> &'static str {
        match self {
            Identity::TwistedCocycle => "twisted-cocycle",
            Identity::Symmetry => "symmetry",
            Identity::Diagonal => "diagonal",
            Identity::Normalization => "normalization",
            Identity::GroupCocycle => "group-cocycle",
            Identity::Moufang => "moufang",
            Identity::Associativity => "associativity",
            Identity::Translations => "translations",
            Identity::Inverses => "inverses",
            Identity::Diassociativity => "diassociativity",
        }
    }
}

/// Canonical word indices of a failing tuple. Loop checks encode an element
/// `(s, v)` as `2 * index(v) + s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Witness(pub Vec<u64>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub identity: Identity,
    pub mode: Mode,
    /// Number of tuples examined.
    pub checked: u64,
    /// Total number of failing tuples found.
    pub violation_count: u64,
    /// The first failing tuples, at most [`MAX_WITNESSES`].
    pub violations: Vec<Witness>,
    pub pass: bool,
}

impl VerificationReport {
    pub(crate) fn new(identity: Identity, mode: Mode) -> Self {
        VerificationReport {
            identity,
            mode,
            checked: 0,
            violation_count: 0,
            violations: Vec::new(),
            pass: true,
        }
    }

    #[inline]
    pub(crate) fn record(&mut self, failed: bool, witness: impl FnOnce() -> Vec<u64>) {
        self.checked += 1;
        if failed {
            self.violation_count += 1;
            self.pass = false;
            if self.violations.len() < MAX_WITNESSES {
                self.violations.push(Witness(witness()));
            }
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} mode={} checked={} violations={}",
            if self.pass { "PASS" } else { "FAIL" },
            self.identity.label(),
            self.mode,
            self.checked,
            self.violation_count
        )?;
        if let Some(w) = self.violations.first() {
            write!(f, " first_witness={:?}", w.0)?;
        }
        Ok(())
    }
}

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Calls `f` on every `arity`-tuple of indices below `size` (exhaustive) or
/// on `count` uniform samples.
pub(crate) fn scan<const N: usize>(size: usize, mode: Mode, mut f: impl FnMut([usize; N])) {
    match mode {
        Mode::Exhaustive => {
            let total = size.pow(N as u32);
            for mut flat in 0..total {
                let mut t = [0usize; N];
                for slot in t.iter_mut().rev() {
                    *slot = flat % size;
                    flat /= size;
                }
                f(t);
            }
        }
        Mode::Sampled { count, seed } => {
            let mut r = rng(seed);
            for _ in 0..count {
                let mut t = [0usize; N];
                for slot in t.iter_mut() {
                    *slot = r.random_range(0..size);
                }
                f(t);
            }
        }
    }
}

fn triple_mode_allowed(t: &CocycleTable, mode: Mode) -> Result<()> {
    if mode == Mode::Exhaustive && t.dimension() > MAX_EXHAUSTIVE_TRIPLE_DIM {
        return Err(Error::Capacity(format!(
            "exhaustive triple scan needs dimension <= {MAX_EXHAUSTIVE_TRIPLE_DIM}, table has {}; use sampled mode",
            t.dimension()
        )));
    }
    Ok(())
}

/// (I1) over triples.
pub fn verify_twisted_cocycle(t: &CocycleTable, mode: Mode) -> Result<VerificationReport> {
    triple_mode_allowed(t, mode)?;
    let mut rep = VerificationReport::new(Identity::TwistedCocycle, mode);
    scan(t.size(), mode, |[u, v, w]| {
        rep.record(cocycle_defect(t, u, v, w) != 0, || vec![u as u64, v as u64, w as u64]);
    });
    Ok(rep)
}

/// The untwisted cocycle identity over triples.
pub fn verify_group_cocycle(t: &CocycleTable, mode: Mode) -> Result<VerificationReport> {
    triple_mode_allowed(t, mode)?;
    let mut rep = VerificationReport::new(Identity::GroupCocycle, mode);
    scan(t.size(), mode, |[u, v, w]| {
        rep.record(group_defect(t, u, v, w) != 0, || vec![u as u64, v as u64, w as u64]);
    });
    Ok(rep)
}

/// (I2) over pairs.
pub fn verify_symmetry(t: &CocycleTable, mode: Mode) -> VerificationReport {
    let mut rep = VerificationReport::new(Identity::Symmetry, mode);
    scan(t.size(), mode, |[v, w]| {
        rep.record(symmetry_defect(t, v, w) != 0, || vec![v as u64, w as u64]);
    });
    rep
}

/// (I3) over single words.
pub fn verify_diagonal(t: &CocycleTable, mode: Mode) -> VerificationReport {
    let mut rep = VerificationReport::new(Identity::Diagonal, mode);
    scan(t.size(), mode, |[v]| {
        rep.record(diagonal_defect(t, v) != 0, || vec![v as u64]);
    });
    rep
}

/// `theta(0, v) = theta(v, 0) = 0`, always exhaustive.
pub fn verify_normalization(t: &CocycleTable) -> VerificationReport {
    let mut rep = VerificationReport::new(Identity::Normalization, Mode::Exhaustive);
    for v in 0..t.size() {
        rep.record(t.get(0, v) != 0 || t.get(v, 0) != 0, || vec![v as u64]);
    }
    rep
}

/// Normalization, (I2) and (I3) exhaustively, and (I1) in `triple_mode`.
pub fn verify_all(t: &CocycleTable, triple_mode: Mode) -> Result<Vec<VerificationReport>> {
    Ok(vec![
        verify_normalization(t),
        verify_twisted_cocycle(t, triple_mode)?,
        verify_symmetry(t, Mode::Exhaustive),
        verify_diagonal(t, Mode::Exhaustive),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{hamming84, q8_cocycle};
    use crate::cocycle::griess_build;
    use crate::code::Code;

    #[test]
    fn scan_counts() {
        let mut n = 0;
        scan::<3>(4, Mode::Exhaustive, |_| n += 1);
        assert_eq!(n, 64);
        let mut a = Vec::new();
        let mut b = Vec::new();
        scan::<2>(100, Mode::sampled(10, 3), |t| a.push(t));
        scan::<2>(100, Mode::sampled(10, 3), |t| b.push(t));
        assert_eq!(a, b);
    }

    #[test]
    fn hamming_suite_passes() {
        let t = griess_build(&hamming84().unwrap(), 0).unwrap();
        let reps = verify_all(&t, Mode::Exhaustive).unwrap();
        assert!(reps.iter().all(|r| r.pass), "{reps:?}");
        assert_eq!(reps[1].checked, 4096);
        assert_eq!(reps[2].checked, 256);
        assert_eq!(reps[3].checked, 16);
    }

    #[test]
    fn single_bit_fault_flags_a_symmetric_pair() {
        let mut t = griess_build(&hamming84().unwrap(), 0).unwrap();
        t.flip(3, 9);
        let rep = verify_symmetry(&t, Mode::Exhaustive);
        assert!(!rep.pass);
        assert_eq!(rep.violation_count, 2);
        assert_eq!(rep.violations, vec![Witness(vec![3, 9]), Witness(vec![9, 3])]);
        assert!(!verify_twisted_cocycle(&t, Mode::Exhaustive).unwrap().pass);
    }

    #[test]
    fn diagonal_fault() {
        let mut t = griess_build(&hamming84().unwrap(), 0).unwrap();
        t.flip(5, 5);
        let rep = verify_diagonal(&t, Mode::Exhaustive);
        assert_eq!(rep.violations, vec![Witness(vec![5])]);
    }

    #[test]
    fn group_cocycle_checks() {
        assert!(verify_group_cocycle(&q8_cocycle(), Mode::Exhaustive).unwrap().pass);
        let t = griess_build(&hamming84().unwrap(), 0).unwrap();
        let rep = verify_group_cocycle(&t, Mode::Exhaustive).unwrap();
        assert!(!rep.pass);
        let w: Vec<u64> = rep.violations[0].0.clone();
        let words = t.words();
        let odd = (words[w[0] as usize] & words[w[1] as usize] & words[w[2] as usize]).count_ones() % 2;
        assert_eq!(odd, 1);
        let zero = CocycleTable::zeros(hamming84().unwrap()).unwrap();
        assert!(verify_group_cocycle(&zero, Mode::Exhaustive).unwrap().pass);
    }

    #[test]
    fn exhaustive_triples_refused_for_large_codes() {
        let basis = (0..7)
            .map(|i| crate::word::BitWord::new(28, 0xfu64 << (4 * i)).unwrap())
            .collect();
        let t = griess_build(&Code::new(28, basis).unwrap(), 0).unwrap();
        assert!(matches!(verify_twisted_cocycle(&t, Mode::Exhaustive), Err(Error::Capacity(_))));
        assert!(verify_twisted_cocycle(&t, Mode::sampled(1000, 1)).unwrap().pass);
    }

    #[test]
    fn report_display() {
        let t = griess_build(&hamming84().unwrap(), 0).unwrap();
        let rep = verify_diagonal(&t, Mode::sampled(5, 9));
        assert_eq!(rep.to_string(), "PASS diagonal mode=sampled(count=5, seed=9) checked=5 violations=0");
    }
}

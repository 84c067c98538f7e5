use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::Config;

use codeloops::builtin::golay;
use codeloops::code_loop::{check_diassociativity, check_inverses, check_moufang, check_translations};
use codeloops::render::{decode_pbm, encode_pbm, BitImage, PbmKind};
use codeloops::verify::verify_all;
use codeloops::{griess_build, twist, BitWord, Code, CocycleFragment, CocycleTable, CodeLoop, Mode};

fn golay_table() -> &'static CocycleTable {
    static T: OnceLock<CocycleTable> = OnceLock::new();
    T.get_or_init(|| griess_build(&golay().unwrap(), 0).unwrap())
}

fn golay_code() -> &'static Code {
    golay_table().code()
}

fn word(bits: u64) -> BitWord {
    BitWord::new(24, bits & 0xFF_FFFF).unwrap()
}

/// Random subcode of the Golay code: combinations of basis rows given by `masks`.
fn subcode(masks: &[u64]) -> Option<Code> {
    let g = golay_code();
    let rows: Vec<BitWord> = masks.iter().map(|&m| g.word_at(m & 0xFFF).unwrap()).collect();
    Code::new(24, rows).ok()
}

/// Apply row operations `ops` (pairs `(i, j)`: row j += row i, or swap when
/// `i == j` picks the next row) to the Golay basis.
fn scrambled_basis(ops: &[(usize, usize)]) -> Vec<BitWord> {
    let mut b = golay_code().basis().to_vec();
    for &(i, j) in ops {
        let (i, j) = (i % 12, j % 12);
        if i == j {
            b.swap(i, (i + 1) % 12);
        } else {
            b[j] = b[j].add(&b[i]).unwrap();
        }
    }
    b
}

proptest! {
    #![proptest_config(Config::with_cases(2000))]

    #[test]
    fn inclusion_exclusion_on_golay_pairs(i in 0u64..4096, j in 0u64..4096) {
        let g = golay_code();
        let (v, w) = (g.word_at(i).unwrap(), g.word_at(j).unwrap());
        let meet = v.bit_and(&w).unwrap().weight();
        let sum = v.add(&w).unwrap().weight();
        prop_assert_eq!(2 * meet, v.weight() + w.weight() - sum);
        prop_assert_eq!(meet % 2, 0);
    }

    #[test]
    fn enumeration_is_a_homomorphism(i in 0u64..4096, j in 0u64..4096) {
        let g = golay_code();
        let sum = g.word_at(i).unwrap().add(&g.word_at(j).unwrap()).unwrap();
        prop_assert_eq!(sum, g.word_at(i ^ j).unwrap());
        prop_assert_eq!(g.index_of(&sum), Some(i ^ j));
    }

    #[test]
    fn membership_matches_enumeration(bits in 0u64..(1 << 24)) {
        let g = golay_code();
        let w = word(bits);
        let listed = g.span_bits().unwrap().contains(&w.bits());
        prop_assert_eq!(g.contains(&w), listed);
    }

    #[test]
    fn twist_is_symmetric_and_trilinear(a in any::<u64>(), b in any::<u64>(), c in any::<u64>(), d in any::<u64>()) {
        let (a, b, c, d) = (word(a), word(b), word(c), word(d));
        let t = twist(&a, &b, &c).unwrap();
        prop_assert_eq!(t, twist(&b, &c, &a).unwrap());
        prop_assert_eq!(t, twist(&c, &b, &a).unwrap());
        let ad = a.add(&d).unwrap();
        prop_assert_eq!(twist(&ad, &b, &c).unwrap(), t ^ twist(&d, &b, &c).unwrap());
    }
}

proptest! {
    #![proptest_config(Config::with_cases(300))]

    #[test]
    fn doubly_even_basis_test_matches_exhaustive(
        golay_masks in prop::collection::vec(1u64..4096, 1..7),
        noise in prop::option::of(1u64..(1 << 24)),
    ) {
        let mut rows: Vec<BitWord> = golay_masks.iter().map(|&m| golay_code().word_at(m).unwrap()).collect();
        if let Some(n) = noise {
            rows.push(word(n));
        }
        if let Ok(code) = Code::new(24, rows) {
            prop_assert_eq!(code.is_doubly_even(), code.is_doubly_even_exhaustive().unwrap());
        }
    }

    #[test]
    fn builder_output_satisfies_every_identity(masks in prop::collection::vec(1u64..4096, 1..6), choice in 0u8..2) {
        prop_assume!(subcode(&masks).is_some());
        let code = subcode(&masks).unwrap();
        let t = griess_build(&code, choice).unwrap();
        for rep in verify_all(&t, Mode::Exhaustive).unwrap() {
            prop_assert!(rep.pass, "{}", rep);
        }
        prop_assert!(t.is_normalized());
    }

    #[test]
    fn small_code_loops_are_moufang_loops(masks in prop::collection::vec(1u64..4096, 1..6)) {
        prop_assume!(subcode(&masks).is_some());
        let l = CodeLoop::new(griess_build(&subcode(&masks).unwrap(), 0).unwrap()).unwrap();
        prop_assert!(check_translations(&l).unwrap().pass);
        prop_assert!(check_inverses(&l).pass);
        prop_assert!(check_diassociativity(&l).pass);
        prop_assert!(check_moufang(&l, Mode::sampled(2000, 5)).unwrap().pass);
    }

    #[test]
    fn serialization_round_trips(masks in prop::collection::vec(1u64..4096, 1..6), v_dim in 0usize..6) {
        prop_assume!(subcode(&masks).is_some());
        let t = griess_build(&subcode(&masks).unwrap(), 0).unwrap();
        prop_assert_eq!(&CocycleTable::from_bytes(&t.to_bytes()).unwrap(), &t);
        let f = CocycleFragment::compress_prefix(&t, v_dim.min(t.dimension())).unwrap();
        prop_assert_eq!(&CocycleFragment::from_bytes(&f.to_bytes()).unwrap(), &f);
        prop_assert_eq!(&f.expand().unwrap(), &t);
    }

    #[test]
    fn reconstruction_over_arbitrary_golay_splits(
        ops in prop::collection::vec((0usize..12, 0usize..12), 0..40),
        v_dim in 0usize..=12,
        pairs in prop::collection::vec((0u64..4096, 0u64..4096), 200),
    ) {
        let t = golay_table();
        let basis = scrambled_basis(&ops);
        let f = CocycleFragment::compress(t, &basis[..v_dim], &basis[v_dim..]).unwrap();
        let reduced = f.reduced();
        for (i, j) in pairs {
            let (c1, c2) = (golay_code().word_at(i).unwrap(), golay_code().word_at(j).unwrap());
            let want = t.value(&c1, &c2).unwrap();
            prop_assert_eq!(f.evaluate(&c1, &c2).unwrap(), want);
            prop_assert_eq!(f.evaluate_reduced(&c1, &c2).unwrap(), want);
            prop_assert_eq!(reduced.evaluate_reduced(&c1, &c2).unwrap(), want);
        }
        prop_assert_eq!(f.stored_values(), ((1u64 << v_dim) + (1u64 << (12 - v_dim)) - 1).pow(2));
    }

    #[test]
    fn pbm_round_trips(w in 1usize..40, h in 1usize..40, seed in any::<u64>()) {
        let mut img = BitImage::new(w, h);
        let mut s = seed;
        for y in 0..h {
            for x in 0..w {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                img.set(x, y, (s >> 63) as u8);
            }
        }
        for kind in [PbmKind::Raw, PbmKind::Plain] {
            prop_assert_eq!(&decode_pbm(&encode_pbm(&img, kind)).unwrap(), &img);
        }
    }
}

#[test]
fn inclusion_exclusion_on_many_random_pairs() {
    use rand::{Rng, SeedableRng};
    let g = golay_code();
    let words = g.span_bits().unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100_000 {
        let (v, w) = (words[rng.random_range(0..4096)], words[rng.random_range(0..4096)]);
        let meet = (v & w).count_ones();
        assert_eq!(2 * meet, v.count_ones() + w.count_ones() - (v ^ w).count_ones());
        assert_eq!(meet % 2, 0);
    }
}

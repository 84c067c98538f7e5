//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use codeloops::builtin::{golay, hamming84};
use codeloops::code_loop::{check_inverses, check_moufang, check_translations, q8_demo};
use codeloops::fragment::tile_exponent;
use codeloops::subspace::for_each_subspace;
use codeloops::verify::{verify_diagonal, verify_normalization, verify_symmetry, verify_twisted_cocycle};
use codeloops::{griess_build, CocycleFragment, CodeLoop, Mode};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(start: Instant, budget: Duration, what: &str) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < budget, format!("{what} took {took:.2?}, budget {budget:.0?}"))?;
    Ok(took)
}

fn hamming_end_to_end() -> Outcome {
    let start = Instant::now();
    let t = griess_build(&hamming84().map_err(|e| e.to_string())?, 0).map_err(|e| e.to_string())?;
    ensure(t.size() == 16, "table side is not 16")?;
    let i1 = verify_twisted_cocycle(&t, Mode::Exhaustive).map_err(|e| e.to_string())?;
    let i2 = verify_symmetry(&t, Mode::Exhaustive);
    let i3 = verify_diagonal(&t, Mode::Exhaustive);
    let l = CodeLoop::new(t).map_err(|e| e.to_string())?;
    let mf = check_moufang(&l, Mode::Exhaustive).map_err(|e| e.to_string())?;
    for (r, n) in [(&i1, 4096), (&i2, 256), (&i3, 16), (&mf, 32768)] {
        ensure(r.pass && r.checked == n, r.to_string())?;
    }
    ensure(l.order() == 32, "loop order is not 32")?;
    let took = within(start, Duration::from_secs(1), "Hamming end-to-end")?;
    Ok(format!("16x16 table; I1 4096, I2 256, I3 16, Moufang 32768 triples, 0 violations; {took:.2?}"))
}

fn golay_reference_basis() -> Outcome {
    let code = golay().map_err(|e| e.to_string())?;
    let start = Instant::now();
    let t = griess_build(&code, 0).map_err(|e| e.to_string())?;
    let build = within(start, Duration::from_secs(2), "Golay build")?;
    ensure(t.size() * t.size() == 16_777_216, "table is not 4096x4096")?;
    let i2 = verify_symmetry(&t, Mode::Exhaustive);
    let i3 = verify_diagonal(&t, Mode::Exhaustive);
    let norm = verify_normalization(&t);
    ensure(i2.pass && i2.checked == 16_777_216, i2.to_string())?;
    ensure(i3.pass && i3.checked == 4096, i3.to_string())?;
    ensure(norm.pass, norm.to_string())?;
    let mode = Mode::sampled(1_000_000, 7);
    let i1 = verify_twisted_cocycle(&t, mode).map_err(|e| e.to_string())?;
    ensure(i1.pass && i1.checked == 1_000_000, i1.to_string())?;
    let l = CodeLoop::new(t).map_err(|e| e.to_string())?;
    let mf = check_moufang(&l, mode).map_err(|e| e.to_string())?;
    ensure(mf.pass && mf.checked == 1_000_000, mf.to_string())?;
    Ok(format!(
        "4096x4096 = 16777216 pixels built in {build:.2?}; I2/I3 exhaustive; I1 and Moufang 10^6 samples (seed 7), 0 violations"
    ))
}

fn figure_structure() -> Outcome {
    let t = griess_build(&golay().map_err(|e| e.to_string())?, 0).map_err(|e| e.to_string())?;
    let zero = (0..64).all(|r| (0..64).all(|c| t.get(r, c) == 0));
    ensure(zero, "theta is not zero on V x V")?;
    let f = CocycleFragment::compress_prefix(&t, 6).map_err(|e| e.to_string())?;
    let tiles = tile_exponent(f.ww());
    ensure(tiles >= 3, format!("W x W tile exponent {tiles} < 3"))?;
    let basis = t.code().basis().to_vec();
    let l = CodeLoop::new(t).map_err(|e| e.to_string())?;
    let v = l.classify_subspace(&basis[..6]).map_err(|e| e.to_string())?;
    ensure(
        v.order == 128 && v.is_elementary_abelian && v.is_associative && v.splits_as_direct_product,
        format!("span(b1..b6): {v}"),
    )?;
    let factor = l
        .is_central_direct_factor(&basis[6..9], &basis[9..12])
        .map_err(|e| e.to_string())?;
    ensure(factor, "span(b7..b9) is not a central direct factor of the W subloop")?;
    let m = l.restrict(&basis[9..12]).map_err(|e| e.to_string())?;
    let mf = check_moufang(&m, Mode::Exhaustive).map_err(|e| e.to_string())?;
    let w = l.classify_subspace(&basis[6..12]).map_err(|e| e.to_string())?;
    ensure(mf.pass && m.order() == 16 && !m.is_commutative(), "M16 restriction is not a nonabelian Moufang loop")?;
    ensure(w.order == 128 && !w.is_associative, format!("W subloop: {w}"))?;
    Ok(format!(
        "V x V zero on 4096 entries; W x W constant on aligned {}x{} tiles; span(b1..b6) elementary abelian of order 128; W subloop consistent with (F2)^3 x M16: span(b7..b9) is a central direct factor, span(b10..b12) is Moufang of order 16",
        1 << tiles,
        1 << tiles
    ))
}

fn compression() -> Outcome {
    let t = griess_build(&golay().map_err(|e| e.to_string())?, 0).map_err(|e| e.to_string())?;
    let f = CocycleFragment::compress_prefix(&t, 6).map_err(|e| e.to_string())?;
    ensure(f.stored_values() == 16129, format!("stored values {}", f.stored_values()))?;
    let words: Vec<_> = t.code().enumerate().map_err(|e| e.to_string())?;
    let start = Instant::now();
    let mut mismatches = 0u64;
    for (r, c1) in words.iter().enumerate() {
        for (c, c2) in words.iter().enumerate() {
            let got = f.evaluate(c1, c2).map_err(|e| e.to_string())?;
            mismatches += (got != t.get(r, c)) as u64;
        }
    }
    ensure(mismatches == 0, format!("{mismatches} mismatches over all pairs"))?;
    let took = within(start, Duration::from_secs(30), "exhaustive round trip")?;
    let reduced = f.reduced();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..1_000_000 {
        let (c1, c2) = (&words[rng.random_range(0..4096)], &words[rng.random_range(0..4096)]);
        let full = f.evaluate(c1, c2).map_err(|e| e.to_string())?;
        let red = reduced.evaluate_reduced(c1, c2).map_err(|e| e.to_string())?;
        ensure(full == red, format!("reduced disagrees at ({c1}, {c2})"))?;
    }
    Ok(format!(
        "16129 stored values; 16777216 pairs reconstructed, 0 mismatches in {took:.2?}; reduced agrees on 10^6 pairs (seed 13)"
    ))
}

fn q8() -> Outcome {
    let rep = q8_demo().map_err(|e| e.to_string())?;
    ensure(rep.associativity_triples == 64 && rep.associative, "not associative on 64 triples")?;
    ensure(rep.is_q8_signature(), format!("{rep:?}"))?;
    Ok("order 8, associative (64 triples), nonabelian, exactly one element of order 2".into())
}

fn property_suites() -> Outcome {
    let g = golay().map_err(|e| e.to_string())?;
    let words = g.span_bits().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100_000 {
        let (v, w) = (words[rng.random_range(0..4096)], words[rng.random_range(0..4096)]);
        let meet = (v & w).count_ones();
        ensure(
            2 * meet == v.count_ones() + w.count_ones() - (v ^ w).count_ones() && meet % 2 == 0,
            format!("inclusion/exclusion fails for {v:#x}, {w:#x}"),
        )?;
    }
    // the Hamming loop and the first loops over small Golay subcodes
    let mut loops = vec![CodeLoop::new(griess_build(&hamming84().map_err(|e| e.to_string())?, 0).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?];
    let mut err = None;
    for d in 1..=3 {
        for_each_subspace(12, d, |masks| {
            if loops.len() >= 300 {
                return false;
            }
            let rows: Vec<_> = masks.iter().map(|&m| g.word_at(m).unwrap()).collect();
            match codeloops::Code::new(24, rows).and_then(|c| griess_build(&c, 0)).and_then(CodeLoop::new) {
                Ok(l) => loops.push(l),
                Err(e) => err = Some(e.to_string()),
            }
            err.is_none()
        });
    }
    if let Some(e) = err {
        return Err(e);
    }
    for l in &loops {
        let tr = check_translations(l).map_err(|e| e.to_string())?;
        let inv = check_inverses(l);
        ensure(tr.pass && inv.pass, format!("{tr}; {inv}"))?;
    }
    let t = griess_build(&g, 0).map_err(|e| e.to_string())?;
    let tw = t.words();
    let mut bad = 0u64;
    for r in 0..4096 {
        for c in 0..4096 {
            let half = ((tw[r] & tw[c]).count_ones() / 2) as u8 & 1;
            bad += (t.get(r, c) ^ t.get(c, r) != half) as u64;
        }
    }
    ensure(bad == 0, format!("transpose relation fails on {bad} pixels"))?;
    Ok(format!(
        "inclusion/exclusion on 10^5 Golay pairs; translations and inverses on {} loops; transpose relation on 16777216 pixels",
        loops.len()
    ))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_codeloops");
    let dirs = [tempfile::tempdir().map_err(|e| e.to_string())?, tempfile::tempdir().map_err(|e| e.to_string())?];
    let run = |dir: &Path, args: &[&str]| -> Result<(), String> {
        let st = Command::new(bin).current_dir(dir).args(args).output().map_err(|e| e.to_string())?;
        ensure(st.status.success(), format!("{args:?} failed: {}", String::from_utf8_lossy(&st.stderr)))
    };
    for d in &dirs {
        for code in ["hamming84", "golay"] {
            run(d.path(), &["build", "--code", code, "--out", &format!("{code}.clt")])?;
            run(d.path(), &["compress", "--table", &format!("{code}.clt"), "--out", &format!("{code}.clf")])?;
            run(d.path(), &["render", "--fragment", &format!("{code}.clf"), "--out", &format!("{code}.pbm")])?;
        }
    }
    let mut bytes = 0;
    for code in ["hamming84", "golay"] {
        for ext in ["clt", "clf", "pbm"] {
            let name = format!("{code}.{ext}");
            let a = std::fs::read(dirs[0].path().join(&name)).map_err(|e| e.to_string())?;
            let b = std::fs::read(dirs[1].path().join(&name)).map_err(|e| e.to_string())?;
            ensure(a == b, format!("{name} differs between runs"))?;
            bytes += a.len();
        }
    }
    Ok(format!("two CLI runs of build+compress+render produce identical CLT1, CLF1 and PBM files ({bytes} bytes each)"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("hamming-end-to-end", hamming_end_to_end),
        ("golay-reference-basis", golay_reference_basis),
        ("figure-structure", figure_structure),
        ("compression", compression),
        ("q8-reconstruction", q8),
        ("property-suites", property_suites),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! The `codeloops` command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;

use crate::api::{resolve_rows, Api};
use crate::builtin::{builtin, Builtin};
use crate::cocycle::{griess_build, CocycleTable};
use crate::code::Code;
use crate::code_loop::{check_associativity, check_diassociativity, check_inverses, check_moufang, check_translations, q8_demo, CodeLoop, SubloopReport};
use crate::error::{Error, Result};
use crate::fragment::CocycleFragment;
use crate::render::{encode_pbm, image_file_name, regularity_score, BitImage, PbmKind, Render};
use crate::serve::ApiServer;
use crate::session::Session;
use crate::subspace::for_each_subspace;
use crate::verify::{verify_diagonal, verify_group_cocycle, verify_normalization, verify_symmetry, verify_twisted_cocycle, Mode, VerificationReport};
use crate::word::BitWord;

#[derive(Debug, Parser)]
#[command(name = "codeloops", version, about = "Build, check, compress and render code loop cocycles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the cocycle builder and write a CLT1 table.
    Build(BuildArgs),
    /// Check cocycle and loop identities on a table.
    Verify(VerifyArgs),
    /// Split a table into a V+W fragment and write CLF1.
    Compress(CompressArgs),
    /// Print theta(c1, c2).
    Eval(EvalArgs),
    /// Write a PBM image of a table or fragment.
    Render(RenderArgs),
    /// Classify subloops over subspaces of the code.
    Scan(ScanArgs),
    /// Serve the JSON API for one exploration session.
    Serve(ServeArgs),
    /// Rebuild Q8 from the built-in four-entry cocycle.
    Q8(Q8Args),
}

#[derive(Debug, Args)]
pub struct CodeSource {
    /// Built-in name or path to a code file.
    #[arg(long)]
    pub code: String,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub choice_bit: u8,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["table", "code"])))]
pub struct TableSource {
    /// CLT1 table file.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Built-in name or code file; the table is built in memory.
    #[arg(long)]
    pub code: Option<String>,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub choice_bit: u8,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Sample this many random triples instead of scanning all of them.
    #[arg(long, requires = "seed")]
    pub sample: Option<u64>,
    /// Seed for sampled checks.
    #[arg(long, requires = "sample")]
    pub seed: Option<u64>,
}

impl SampleArgs {
    pub fn mode(&self) -> Mode {
        match (self.sample, self.seed) {
            (Some(count), Some(seed)) => Mode::sampled(count, seed),
            _ => Mode::Exhaustive,
        }
    }
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub source: CodeSource,
    /// Output path; defaults to `<code>.clt`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: TableSource,
    /// Twisted cocycle identity (triples).
    #[arg(long)]
    pub cocycle: bool,
    /// theta(v,w) + theta(w,v) = |v&w|/2 (pairs).
    #[arg(long)]
    pub symmetry: bool,
    /// theta(v,v) = |v|/4.
    #[arg(long)]
    pub diagonal: bool,
    #[arg(long)]
    pub normalization: bool,
    /// Untwisted cocycle identity; fails for any nontrivial code loop.
    #[arg(long)]
    pub group_cocycle: bool,
    /// Moufang identity on loop element triples.
    #[arg(long)]
    pub moufang: bool,
    /// Associativity on codeword triples.
    #[arg(long)]
    pub associativity: bool,
    /// Translations are bijections (small loops only).
    #[arg(long)]
    pub translations: bool,
    #[arg(long)]
    pub inverses: bool,
    #[arg(long)]
    pub diassociativity: bool,
    #[command(flatten)]
    pub sample: SampleArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("split").args(["v_dim", "v_rows"])))]
pub struct CompressArgs {
    #[command(flatten)]
    pub source: TableSource,
    /// V is spanned by the first D basis rows, W by the rest. Default k/2.
    #[arg(long)]
    pub v_dim: Option<usize>,
    /// Comma-separated V basis (codewords or row indices).
    #[arg(long, requires = "w_rows")]
    pub v_rows: Option<String>,
    /// Comma-separated W basis.
    #[arg(long, requires = "v_rows")]
    pub w_rows: Option<String>,
    /// Output path; defaults to `<code>.clf`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["fragment", "table", "code"])))]
pub struct EvalArgs {
    #[arg(long)]
    pub fragment: Option<PathBuf>,
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long)]
    pub code: Option<String>,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub choice_bit: u8,
    /// Evaluate through the derived W x V block.
    #[arg(long, requires = "fragment")]
    pub reduced: bool,
    /// First codeword, hex (0x...) or bitstring.
    pub c1: String,
    pub c2: String,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["fragment", "table", "code"])))]
pub struct RenderArgs {
    #[arg(long)]
    pub fragment: Option<PathBuf>,
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long)]
    pub code: Option<String>,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub choice_bit: u8,
    /// Render the fragment for this split instead of the full table.
    #[arg(long, conflicts_with = "fragment")]
    pub v_dim: Option<usize>,
    /// Output file.
    #[arg(long, conflicts_with = "out_dir")]
    pub out: Option<PathBuf>,
    /// Directory for `<code>-<basis-hash>.pbm`; defaults to the current one.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Name used in the default file name.
    #[arg(long)]
    pub name: Option<String>,
    /// Plain-text P1 instead of binary P4.
    #[arg(long)]
    pub plain: bool,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub source: TableSource,
    /// Subspace to classify, as comma-separated codewords or row indices. Repeatable.
    #[arg(long)]
    pub span: Vec<String>,
    /// Without --span, scan every subspace of dimension 1..=D.
    #[arg(long, default_value_t = 2)]
    pub max_dim: usize,
    /// Stop after this many subspaces.
    #[arg(long, default_value_t = 1000)]
    pub limit: usize,
    /// Report only associative subloops.
    #[arg(long)]
    pub associative_only: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[command(flatten)]
    pub source: CodeSource,
    /// Split point of the session fragment; defaults to k/2.
    #[arg(long)]
    pub v_dim: Option<usize>,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value_t = 4)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct Q8Args {
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }
}

/// Loads a code by built-in name or from a file; returns it with a display name.
pub fn load_code(src: &str) -> Result<(String, Code)> {
    match builtin(src) {
        Ok(Builtin::Code(c)) => return Ok((src.to_string(), c)),
        Ok(Builtin::Table(_)) => {
            return Err(Error::InvalidArgument(format!("'{src}' is a cocycle table, not a code")))
        }
        Err(_) => {}
    }
    let path = Path::new(src);
    if !path.exists() {
        return Err(Error::UnknownBuiltin(src.to_string()));
    }
    let code = Code::parse(&fs::read_to_string(path)?)?;
    Ok((file_stem(path), code))
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "table".into())
}

fn load_table_from(table: Option<&Path>, code: Option<&str>, choice_bit: u8) -> Result<(String, CocycleTable)> {
    if let Some(p) = table {
        return Ok((file_stem(p), CocycleTable::read_from(fs::File::open(p)?)?));
    }
    let src = code.ok_or_else(|| Error::InvalidArgument("need --table or --code".into()))?;
    if let Ok(Builtin::Table(t)) = builtin(src) {
        return Ok((src.to_string(), t));
    }
    let (name, code) = load_code(src)?;
    Ok((name, griess_build(&code, choice_bit)?))
}

fn load_table(s: &TableSource) -> Result<(String, CocycleTable)> {
    load_table_from(s.table.as_deref(), s.code.as_deref(), s.choice_bit)
}

fn parse_word(code: &Code, s: &str) -> Result<BitWord> {
    BitWord::parse(s, code.length())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<Outcome> {
    match cli.command {
        Command::Build(a) => cmd_build(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Compress(a) => cmd_compress(a, out),
        Command::Eval(a) => cmd_eval(a, out),
        Command::Render(a) => cmd_render(a, out),
        Command::Scan(a) => cmd_scan(a, out),
        Command::Serve(a) => cmd_serve(a, out),
        Command::Q8(a) => cmd_q8(a, out),
    }
}

fn cmd_build(a: BuildArgs, out: &mut dyn Write) -> Result<Outcome> {
    let (name, code) = load_code(&a.source.code)?;
    let table = griess_build(&code, a.source.choice_bit)?;
    let path = a.out.unwrap_or_else(|| PathBuf::from(format!("{name}.clt")));
    let bytes = table.to_bytes();
    fs::write(&path, &bytes)?;
    let side = table.size();
    writeln!(out, "code: {name} n={} k={}", code.length(), code.dimension())?;
    writeln!(
        out,
        "table: {side}x{side} = {} bits, {} bytes of rows",
        side * side,
        side * side.div_ceil(8)
    )?;
    writeln!(out, "wrote {} ({} bytes)", path.display(), bytes.len())?;
    Ok(Outcome::Pass)
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<Outcome> {
    let (_, table) = load_table(&a.source)?;
    let triple = a.sample.mode();
    let any = a.cocycle
        || a.symmetry
        || a.diagonal
        || a.normalization
        || a.group_cocycle
        || a.moufang
        || a.associativity
        || a.translations
        || a.inverses
        || a.diassociativity;
    let suite = !any;
    let needs_loop = a.moufang || a.associativity || a.translations || a.inverses || a.diassociativity || suite;
    let mut reports: Vec<VerificationReport> = Vec::new();
    if a.normalization || suite {
        reports.push(verify_normalization(&table));
    }
    if a.cocycle || suite {
        reports.push(verify_twisted_cocycle(&table, triple)?);
    }
    if a.symmetry || suite {
        reports.push(verify_symmetry(&table, Mode::Exhaustive));
    }
    if a.diagonal || suite {
        reports.push(verify_diagonal(&table, Mode::Exhaustive));
    }
    if a.group_cocycle {
        reports.push(verify_group_cocycle(&table, triple)?);
    }
    if needs_loop {
        if !table.is_normalized() {
            // loop checks need an identity element
            reports.push(verify_normalization(&table));
        } else {
            let l = CodeLoop::new(table)?;
            if a.moufang || suite {
                reports.push(check_moufang(&l, triple)?);
            }
            if a.associativity {
                reports.push(check_associativity(&l, triple)?);
            }
            if a.translations {
                reports.push(check_translations(&l)?);
            }
            if a.inverses {
                reports.push(check_inverses(&l));
            }
            if a.diassociativity {
                reports.push(check_diassociativity(&l));
            }
        }
    }
    let pass = reports.iter().all(|r| r.pass);
    if a.json {
        #[derive(Serialize)]
        struct Out<'a> {
            pass: bool,
            reports: &'a [VerificationReport],
        }
        serde_json::to_writer(&mut *out, &Out { pass, reports: &reports }).map_err(std::io::Error::other)?;
        writeln!(out)?;
    } else {
        for r in &reports {
            writeln!(out, "{r}")?;
            for w in r.violations.iter().skip(1) {
                writeln!(out, "  witness {:?}", w.0)?;
            }
        }
        writeln!(out, "{}", if pass { "all checks passed" } else { "verification FAILED" })?;
    }
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}

fn cmd_compress(a: CompressArgs, out: &mut dyn Write) -> Result<Outcome> {
    let (name, table) = load_table(&a.source)?;
    let code = table.code().clone();
    let fragment = match (&a.v_rows, &a.w_rows) {
        (Some(v), Some(w)) => {
            CocycleFragment::compress(&table, &resolve_rows(&code, v)?, &resolve_rows(&code, w)?)?
        }
        _ => CocycleFragment::compress_prefix(&table, a.v_dim.unwrap_or(code.dimension() / 2))?,
    };
    let path = a.out.unwrap_or_else(|| PathBuf::from(format!("{name}.clf")));
    let bytes = fragment.to_bytes();
    fs::write(&path, &bytes)?;
    let stats = fragment.quadrant_stats();
    if a.json {
        serde_json::to_writer(&mut *out, &stats).map_err(std::io::Error::other)?;
        writeln!(out)?;
    } else {
        writeln!(out, "split: dim V={} dim W={}", fragment.v_dim(), fragment.w_dim())?;
        writeln!(out, "stored values: {}", fragment.stored_values())?;
        let blocks = [("VxV", Some(stats.vv)), ("VxW", Some(stats.vw)), ("WxV", stats.wv), ("WxW", Some(stats.ww))];
        for (label, b) in blocks {
            if let Some(b) = b {
                writeln!(
                    out,
                    "{label}: {}x{} ones={} zero={} tile={}",
                    b.rows,
                    b.cols,
                    b.ones,
                    b.all_zero,
                    b.tile_size()
                )?;
            }
        }
        writeln!(out, "wrote {} ({} bytes)", path.display(), bytes.len())?;
    }
    Ok(Outcome::Pass)
}

fn cmd_eval(a: EvalArgs, out: &mut dyn Write) -> Result<Outcome> {
    let bit = if let Some(p) = &a.fragment {
        let f = CocycleFragment::read_from(fs::File::open(p)?)?;
        let (c1, c2) = (parse_word(f.code(), &a.c1)?, parse_word(f.code(), &a.c2)?);
        if a.reduced {
            f.evaluate_reduced(&c1, &c2)?
        } else {
            f.evaluate(&c1, &c2)?
        }
    } else {
        let (_, t) = load_table_from(a.table.as_deref(), a.code.as_deref(), a.choice_bit)?;
        t.value(&parse_word(t.code(), &a.c1)?, &parse_word(t.code(), &a.c2)?)?
    };
    writeln!(out, "{bit}")?;
    Ok(Outcome::Pass)
}

fn cmd_render(a: RenderArgs, out: &mut dyn Write) -> Result<Outcome> {
    let (default_name, code, img): (String, Code, BitImage) = if let Some(p) = &a.fragment {
        let f = CocycleFragment::read_from(fs::File::open(p)?)?;
        (file_stem(p), f.code().clone(), f.to_image())
    } else {
        let (name, t) = load_table_from(a.table.as_deref(), a.code.as_deref(), a.choice_bit)?;
        let img = match a.v_dim {
            Some(d) => CocycleFragment::compress_prefix(&t, d)?.to_image(),
            None => t.to_image(),
        };
        (name, t.code().clone(), img)
    };
    let path = match a.out {
        Some(p) => p,
        None => {
            let name = a.name.unwrap_or(default_name);
            a.out_dir.unwrap_or_else(|| PathBuf::from(".")).join(image_file_name(&name, &code))
        }
    };
    let kind = if a.plain { PbmKind::Plain } else { PbmKind::Raw };
    fs::write(&path, encode_pbm(&img, kind))?;
    let score = regularity_score(&img)
        .map(|s| format!("{s:.6}"))
        .unwrap_or_else(|_| "n/a".into());
    writeln!(
        out,
        "wrote {} ({}x{}, regularity {score})",
        path.display(),
        img.width(),
        img.height()
    )?;
    Ok(Outcome::Pass)
}

fn cmd_scan(a: ScanArgs, out: &mut dyn Write) -> Result<Outcome> {
    let (_, table) = load_table(&a.source)?;
    let l = CodeLoop::new(table)?;
    let code = l.code().clone();
    let emit = |rep: SubloopReport, out: &mut dyn Write| -> Result<()> {
        if a.associative_only && !rep.is_associative {
            return Ok(());
        }
        if a.json {
            serde_json::to_writer(&mut *out, &rep).map_err(std::io::Error::other)?;
            writeln!(out)?;
        } else {
            writeln!(out, "{}", rep.to_line())?;
        }
        Ok(())
    };
    if !a.span.is_empty() {
        for s in &a.span {
            emit(l.classify_subspace(&resolve_rows(&code, s)?)?, out)?;
        }
        return Ok(Outcome::Pass);
    }
    let mut seen = 0usize;
    let mut err = None;
    for d in 1..=a.max_dim.min(code.dimension()) {
        let done = for_each_subspace(code.dimension(), d, |masks| {
            if seen >= a.limit {
                return false;
            }
            seen += 1;
            let rows: Result<Vec<BitWord>> = masks.iter().map(|&m| code.word_at(m)).collect();
            let res = rows
                .and_then(|rows| l.classify_subspace(&rows))
                .and_then(|rep| emit(rep, out));
            match res {
                Ok(()) => true,
                Err(e) => {
                    err = Some(e);
                    false
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        if !done {
            break;
        }
    }
    if !a.json {
        writeln!(out, "scanned {seen} subspaces")?;
    }
    Ok(Outcome::Pass)
}

fn cmd_serve(a: ServeArgs, out: &mut dyn Write) -> Result<Outcome> {
    let (name, code) = load_code(&a.source.code)?;
    let v_dim = a.v_dim.unwrap_or(code.dimension() / 2);
    let session = Session::new(name, code, v_dim, a.source.choice_bit)?;
    let server = ApiServer::bind(&format!("{}:{}", a.host, a.port), Api::new(session))?;
    match server.local_addr() {
        Some(addr) => writeln!(out, "listening on http://{addr}")?,
        None => writeln!(out, "listening")?,
    }
    out.flush()?;
    server.run(a.workers);
    Ok(Outcome::Pass)
}

fn cmd_q8(a: Q8Args, out: &mut dyn Write) -> Result<Outcome> {
    let rep = q8_demo()?;
    let ok = rep.is_q8_signature();
    if a.json {
        serde_json::to_writer(&mut *out, &rep).map_err(std::io::Error::other)?;
        writeln!(out)?;
    } else {
        writeln!(out, "order: {}", rep.order)?;
        writeln!(out, "associative: {} ({} triples)", rep.associative, rep.associativity_triples)?;
        writeln!(out, "nonabelian: {}", rep.nonabelian)?;
        let counts: Vec<String> = rep.order_counts.iter().map(|(o, n)| format!("{n} of order {o}")).collect();
        writeln!(out, "elements: {}", counts.join(", "))?;
        writeln!(out, "ij sign={} ji sign={}", rep.ij_sign, rep.ji_sign)?;
        writeln!(out, "{}", if ok { "Q8 signature: yes" } else { "Q8 signature: NO" })?;
    }
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}

//! C ABI over `codeloops`.
//!
//! Objects are opaque handles created by `cl_*` constructors and released
//! with the matching `*_free`. Fallible calls return a [`ClStatus`] and
//! write results through out-pointers; on failure
//! [`cl_last_error_message`] describes the error on the calling thread.
//! Words are passed as `uint64_t` holding the integer value of the
//! bitstring (coordinate 0 is the most significant of the `n` used bits).

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use codeloops::builtin::{builtin, Builtin};
use codeloops::code_loop::check_moufang;
use codeloops::verify::verify_all;
use codeloops::{griess_build, BitWord, Code, CocycleFragment, CocycleTable, CodeLoop, Error, LoopElement, Mode};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotDoublyEven = 3,
    DependentBasis = 4,
    NotInCode = 5,
    Capacity = 6,
    Parse = 7,
    Format = 8,
    Io = 9,
    UnknownBuiltin = 10,
    Panic = 99,
}

pub struct ClCode(Code);
pub struct ClTable(CodeLoop);
pub struct ClFragment(CocycleFragment);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> ClStatus {
    match e {
        Error::LengthMismatch { .. } | Error::BadLength(_) | Error::InvalidArgument(_) | Error::NotComplementary(_) => {
            ClStatus::InvalidArgument
        }
        Error::DependentBasis { .. } => ClStatus::DependentBasis,
        Error::NotDoublyEven(_) => ClStatus::NotDoublyEven,
        Error::Capacity(_) => ClStatus::Capacity,
        Error::NotInCode(_) => ClStatus::NotInCode,
        Error::UnknownBuiltin(_) => ClStatus::UnknownBuiltin,
        Error::Parse(_) => ClStatus::Parse,
        Error::Format { .. } => ClStatus::Format,
        Error::Io(_) => ClStatus::Io,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ClStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            ClStatus::Ok
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            ClStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            ClStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn c_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Lib(Error::Parse(format!("{what} is not UTF-8"))))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `len`). Returns the full message length
/// excluding the terminator.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cl_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Looks up a built-in code by name.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_code_builtin(name: *const c_char, out: *mut *mut ClCode) -> ClStatus {
    guard(|| {
        let name = c_str(name, "name")?;
        let code = match builtin(name)? {
            Builtin::Code(c) => c,
            Builtin::Table(t) => t.code().clone(),
        };
        put(out, boxed(ClCode(code)), "out")
    })
}

/// Parses the text code format (`n k` then one row per line).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_code_parse(text: *const c_char, out: *mut *mut ClCode) -> ClStatus {
    guard(|| {
        let code = Code::parse(c_str(text, "text")?)?;
        put(out, boxed(ClCode(code)), "out")
    })
}

/// Builds a code of length `length` from `count` basis words.
///
/// # Safety
/// `rows` must point to `count` readable words; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_code_from_rows(
    length: u32,
    rows: *const u64,
    count: usize,
    out: *mut *mut ClCode,
) -> ClStatus {
    guard(|| {
        let rows: &[u64] = if count == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(deref(rows, "rows")?, count)
        };
        let basis = rows
            .iter()
            .map(|&r| BitWord::new(length as usize, r))
            .collect::<Result<Vec<_>, _>>()?;
        put(out, boxed(ClCode(Code::new(length as usize, basis)?)), "out")
    })
}

/// # Safety
/// `code` must be null or a handle from a `cl_code_*` constructor, freed once.
#[no_mangle]
pub unsafe extern "C" fn cl_code_free(code: *mut ClCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Code dimension `k`, or 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cl_code_dimension(code: *const ClCode) -> usize {
    code.as_ref().map_or(0, |c| c.0.dimension())
}

/// Code length `n`, or 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cl_code_length(code: *const ClCode) -> usize {
    code.as_ref().map_or(0, |c| c.0.length())
}

/// Basis row `i`.
///
/// # Safety
/// `code` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_code_basis_word(code: *const ClCode, i: usize, out: *mut u64) -> ClStatus {
    guard(|| {
        let c = &deref(code, "code")?.0;
        let w = c
            .basis()
            .get(i)
            .ok_or_else(|| Error::InvalidArgument(format!("row {i} out of range")))?;
        put(out, w.bits(), "out")
    })
}

/// # Safety
/// `code` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_code_is_doubly_even(code: *const ClCode, out: *mut bool) -> ClStatus {
    guard(|| put(out, deref(code, "code")?.0.is_doubly_even(), "out"))
}

/// Runs the cocycle builder.
///
/// # Safety
/// `code` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_table_build(code: *const ClCode, choice_bit: u8, out: *mut *mut ClTable) -> ClStatus {
    guard(|| {
        let t = griess_build(&deref(code, "code")?.0, choice_bit)?;
        put(out, boxed(ClTable(CodeLoop::new(t)?)), "out")
    })
}

/// # Safety
/// `table` must be null or a handle from `cl_table_build`/`cl_table_read`, freed once.
#[no_mangle]
pub unsafe extern "C" fn cl_table_free(table: *mut ClTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Side length `2^k`, or 0 for a null handle.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cl_table_size(table: *const ClTable) -> usize {
    table.as_ref().map_or(0, |t| t.0.table().size())
}

/// Entry at canonical indices `(row, col)`.
///
/// # Safety
/// `table` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_table_get(table: *const ClTable, row: usize, col: usize, out: *mut u8) -> ClStatus {
    guard(|| {
        let t = deref(table, "table")?.0.table();
        if row >= t.size() || col >= t.size() {
            return Err(Error::InvalidArgument(format!("index out of range for side {}", t.size())).into());
        }
        put(out, t.get(row, col), "out")
    })
}

/// `theta(v, w)` for two codewords.
///
/// # Safety
/// `table` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_table_value(table: *const ClTable, v: u64, w: u64, out: *mut u8) -> ClStatus {
    guard(|| {
        let t = deref(table, "table")?.0.table();
        let n = t.code().length();
        put(out, t.value(&BitWord::new(n, v)?, &BitWord::new(n, w)?)?, "out")
    })
}

/// Checks normalization and both pair identities exhaustively, and the
/// twisted cocycle and Moufang identities on triples: exhaustively when
/// `sample_count` is 0, otherwise on `sample_count` seeded samples each.
///
/// # Safety
/// `table` must be a live handle; `pass` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_table_verify(
    table: *const ClTable,
    sample_count: u64,
    seed: u64,
    pass: *mut bool,
) -> ClStatus {
    guard(|| {
        let l = &deref(table, "table")?.0;
        let mode = if sample_count == 0 {
            Mode::Exhaustive
        } else {
            Mode::sampled(sample_count, seed)
        };
        let mut ok = verify_all(l.table(), mode)?.iter().all(|r| r.pass);
        ok &= check_moufang(l, mode)?.pass;
        put(pass, ok, "pass")
    })
}

/// Writes the table as CLT1.
///
/// # Safety
/// `table` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cl_table_write(table: *const ClTable, path: *const c_char) -> ClStatus {
    guard(|| {
        let t = deref(table, "table")?.0.table();
        fs::write(c_str(path, "path")?, t.to_bytes()).map_err(Error::from)?;
        Ok(())
    })
}

/// Reads a CLT1 file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_table_read(path: *const c_char, out: *mut *mut ClTable) -> ClStatus {
    guard(|| {
        let bytes = fs::read(c_str(path, "path")?).map_err(Error::from)?;
        let t = CocycleTable::from_bytes(&bytes)?;
        put(out, boxed(ClTable(CodeLoop::new(t)?)), "out")
    })
}

/// Multiplies `(sign_a, word_a)` by `(sign_b, word_b)` in the code loop.
///
/// # Safety
/// `table` must be a live handle; both out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_loop_multiply(
    table: *const ClTable,
    sign_a: u8,
    word_a: u64,
    sign_b: u8,
    word_b: u64,
    out_sign: *mut u8,
    out_word: *mut u64,
) -> ClStatus {
    guard(|| {
        let l = &deref(table, "table")?.0;
        let n = l.code().length();
        let a = LoopElement::new(sign_a, BitWord::new(n, word_a)?);
        let b = LoopElement::new(sign_b, BitWord::new(n, word_b)?);
        let p = l.multiply(&a, &b)?;
        put(out_sign, p.sign, "out_sign")?;
        put(out_word, p.word.bits(), "out_word")
    })
}

/// Compresses a table with V spanned by the first `v_dim` basis rows.
///
/// # Safety
/// `table` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_fragment_compress(
    table: *const ClTable,
    v_dim: usize,
    out: *mut *mut ClFragment,
) -> ClStatus {
    guard(|| {
        let t = deref(table, "table")?.0.table();
        put(out, boxed(ClFragment(CocycleFragment::compress_prefix(t, v_dim)?)), "out")
    })
}

/// # Safety
/// `fragment` must be null or a handle from `cl_fragment_compress`, freed once.
#[no_mangle]
pub unsafe extern "C" fn cl_fragment_free(fragment: *mut ClFragment) {
    if !fragment.is_null() {
        drop(Box::from_raw(fragment));
    }
}

/// Number of distinct stored values, or 0 for a null handle.
///
/// # Safety
/// `fragment` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cl_fragment_stored_values(fragment: *const ClFragment) -> u64 {
    fragment.as_ref().map_or(0, |f| f.0.stored_values())
}

/// `theta(c1, c2)` reconstructed from the fragment; `reduced` evaluates
/// through the derived W x V block.
///
/// # Safety
/// `fragment` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_fragment_eval(
    fragment: *const ClFragment,
    c1: u64,
    c2: u64,
    reduced: bool,
    out: *mut u8,
) -> ClStatus {
    guard(|| {
        let f = &deref(fragment, "fragment")?.0;
        let n = f.code().length();
        let (a, b) = (BitWord::new(n, c1)?, BitWord::new(n, c2)?);
        let bit = if reduced {
            f.evaluate_reduced(&a, &b)?
        } else {
            f.evaluate(&a, &b)?
        };
        put(out, bit, "out")
    })
}

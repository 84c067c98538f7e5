use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use codeloops_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as std::ffi::c_char; 256];
    unsafe { cl_last_error_message(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn builtin(name: &str) -> *mut ClCode {
    let name = CString::new(name).unwrap();
    let mut code = ptr::null_mut();
    assert_eq!(unsafe { cl_code_builtin(name.as_ptr(), &mut code) }, ClStatus::Ok);
    code
}

#[test]
fn hamming_round_trip() {
    unsafe {
        let code = builtin("hamming84");
        assert_eq!(cl_code_dimension(code), 4);
        assert_eq!(cl_code_length(code), 8);
        let mut de = false;
        assert_eq!(cl_code_is_doubly_even(code, &mut de), ClStatus::Ok);
        assert!(de);

        let mut t = ptr::null_mut();
        assert_eq!(cl_table_build(code, 0, &mut t), ClStatus::Ok);
        assert_eq!(cl_table_size(t), 16);
        let mut pass = false;
        assert_eq!(cl_table_verify(t, 0, 0, &mut pass), ClStatus::Ok);
        assert!(pass);

        // theta(b, b) = |b|/4 = 1 for a weight-4 row
        let mut b0 = 0u64;
        assert_eq!(cl_code_basis_word(code, 0, &mut b0), ClStatus::Ok);
        let mut bit = 9u8;
        assert_eq!(cl_table_value(t, b0, b0, &mut bit), ClStatus::Ok);
        assert_eq!(bit, 1);

        let (mut s, mut w) = (9u8, 9u64);
        assert_eq!(cl_loop_multiply(t, 0, b0, 0, b0, &mut s, &mut w), ClStatus::Ok);
        assert_eq!((s, w), (1, 0));

        let dir = tempfile::tempdir().unwrap();
        let path = CString::new(dir.path().join("h.clt").to_str().unwrap()).unwrap();
        assert_eq!(cl_table_write(t, path.as_ptr()), ClStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(cl_table_read(path.as_ptr(), &mut back), ClStatus::Ok);
        for r in 0..16 {
            for c in 0..16 {
                let (mut x, mut y) = (0u8, 0u8);
                cl_table_get(t, r, c, &mut x);
                cl_table_get(back, r, c, &mut y);
                assert_eq!(x, y);
            }
        }

        let mut f = ptr::null_mut();
        assert_eq!(cl_fragment_compress(t, 2, &mut f), ClStatus::Ok);
        assert_eq!(cl_fragment_stored_values(f), 49);
        let mut b1 = 0u64;
        cl_code_basis_word(code, 1, &mut b1);
        let (mut full, mut red, mut direct) = (0u8, 0u8, 0u8);
        cl_fragment_eval(f, b0 ^ b1, b1, false, &mut full);
        cl_fragment_eval(f, b0 ^ b1, b1, true, &mut red);
        cl_table_value(t, b0 ^ b1, b1, &mut direct);
        assert_eq!((full, red), (direct, direct));

        cl_fragment_free(f);
        cl_table_free(back);
        cl_table_free(t);
        cl_code_free(code);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let name = CString::new("nope").unwrap();
        let mut code = ptr::null_mut();
        assert_eq!(cl_code_builtin(name.as_ptr(), &mut code), ClStatus::UnknownBuiltin);
        assert!(code.is_null());
        assert!(last_error().contains("nope"));

        assert_eq!(cl_code_builtin(ptr::null(), &mut code), ClStatus::NullPointer);

        let rows = [0b1100_0000u64, 0b1100_0000];
        assert_eq!(cl_code_from_rows(8, rows.as_ptr(), 2, &mut code), ClStatus::DependentBasis);

        let text = CString::new("4 1\n1100\n").unwrap();
        assert_eq!(cl_code_parse(text.as_ptr(), &mut code), ClStatus::Ok);
        let mut t = ptr::null_mut();
        assert_eq!(cl_table_build(code, 0, &mut t), ClStatus::NotDoublyEven);
        assert!(t.is_null());
        cl_code_free(code);

        let h = builtin("hamming84");
        cl_table_build(h, 0, &mut t);
        let mut bit = 0u8;
        assert_eq!(cl_table_get(t, 16, 0, &mut bit), ClStatus::InvalidArgument);
        assert_eq!(cl_table_value(t, 0b1000_0000, 0, &mut bit), ClStatus::NotInCode);
        cl_table_free(t);
        cl_code_free(h);

        // null handles are harmless
        cl_table_free(ptr::null_mut());
        assert_eq!(cl_table_size(ptr::null()), 0);

        let s = CStr::from_ptr(cl_version()).to_str().unwrap();
        assert_eq!(s, env!("CARGO_PKG_VERSION"));
    }
}

fn have_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok_and(|o| o.status.success())
}

fn header_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

#[test]
fn header_compiles_as_c_and_cpp() {
    if !have_cc() {
        eprintln!("cc not found; skipping header check");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("h.c");
    std::fs::write(&src, "#include \"codeloops.h\"\nint main(void) { return CL_STATUS_OK; }\n").unwrap();
    let st = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header_dir())
        .arg(&src)
        .status()
        .unwrap();
    assert!(st.success());
    let st = Command::new("cc")
        .args(["-x", "c++", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header_dir())
        .arg(&src)
        .status()
        .unwrap();
    assert!(st.success());
}

const C_DEMO: &str = r#"
#include <stdio.h>
#include "codeloops.h"
int main(void) {
    ClCode *code = NULL; ClTable *t = NULL; ClFragment *f = NULL;
    if (cl_code_builtin("golay", &code) != CL_STATUS_OK) return 10;
    if (cl_table_build(code, 0, &t) != CL_STATUS_OK) return 11;
    if (cl_fragment_compress(t, 6, &f) != CL_STATUS_OK) return 12;
    printf("%zu %llu\n", cl_table_size(t), (unsigned long long)cl_fragment_stored_values(f));
    bool pass = false;
    if (cl_table_verify(t, 1000, 7, &pass) != CL_STATUS_OK || !pass) return 13;
    char msg[128];
    if (cl_code_builtin("bogus", &code) != CL_STATUS_UNKNOWN_BUILTIN) return 14;
    cl_last_error_message(msg, sizeof msg);
    printf("%s\n", msg);
    cl_fragment_free(f); cl_table_free(t);
    return 0;
}
"#;

#[test]
fn c_program_links_against_static_library() {
    // target/<profile>/deps/<test-exe>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libcodeloops_ffi.a");
    if !have_cc() || !lib.exists() {
        eprintln!("cc or {} missing; skipping link test", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("demo.c");
    let bin = dir.path().join("demo");
    std::fs::write(&src, C_DEMO).unwrap();
    let st = Command::new("cc")
        .arg("-I")
        .arg(header_dir())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(st.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("4096 16129"));
    assert!(lines.next().unwrap().contains("bogus"));
}

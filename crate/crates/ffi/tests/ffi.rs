use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use tropint_ffi::*;

fn take(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { tropint_string_free(p) };
    s
}

fn last_error() -> String {
    let p = tropint_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

#[test]
fn lattice_and_theta() {
    let mut l = ptr::null_mut();
    let entries = [2i64, 1, 1, 2];
    assert_eq!(
        unsafe { tropint_lattice_new(entries.as_ptr(), 2, &mut l) },
        TropintStatus::Ok
    );
    let mut g = 0;
    assert_eq!(
        unsafe { tropint_lattice_genus(l, &mut g) },
        TropintStatus::Ok
    );
    assert_eq!(g, 2);

    let (mut v, mut count) = (ptr::null_mut(), 0usize);
    let z = c("1,0");
    assert_eq!(
        unsafe { tropint_theta(l, z.as_ptr(), &mut v, &mut count) },
        TropintStatus::Ok
    );
    // n = 0, (-1, 0) and (-1, 1) all give 0.
    assert_eq!((take(v).as_str(), count), ("0", 3));

    let z = c("5/2,3");
    assert_eq!(
        unsafe { tropint_torus_reduce(l, z.as_ptr(), &mut v) },
        TropintStatus::Ok
    );
    let reduced = take(v);
    assert!(reduced.starts_with('('), "{reduced}");

    let bad = c("1,zz");
    assert_eq!(
        unsafe { tropint_theta(l, bad.as_ptr(), &mut v, ptr::null_mut()) },
        TropintStatus::Parse
    );
    assert!(!last_error().is_empty());
    let short = c("1");
    assert_eq!(
        unsafe { tropint_theta(l, short.as_ptr(), &mut v, ptr::null_mut()) },
        TropintStatus::InvalidArgument
    );
    unsafe { tropint_lattice_free(l) };
}

#[test]
fn indefinite_matrix_is_rejected() {
    let mut l = ptr::null_mut();
    let entries = [1i64, 2, 2, 1];
    assert_eq!(
        unsafe { tropint_lattice_new(entries.as_ptr(), 2, &mut l) },
        TropintStatus::InvalidArgument
    );
    assert!(l.is_null());
    assert!(
        last_error().contains("positive definite"),
        "{}",
        last_error()
    );
}

#[test]
fn curves() {
    let mut cv = ptr::null_mut();
    let poly = c("min(X, Y, 1)");
    assert_eq!(
        unsafe { tropint_curve_extract(poly.as_ptr(), &mut cv) },
        TropintStatus::Ok
    );
    let (mut v, mut e, mut g) = (0, 0, 0);
    assert_eq!(
        unsafe { tropint_curve_counts(cv, &mut v, &mut e, &mut g) },
        TropintStatus::Ok
    );
    assert_eq!((v, e, g), (1, 3, 0));
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { tropint_curve_json(cv, &mut s) }, TropintStatus::Ok);
    let json = take(s);
    assert!(json.contains("\"vertices\""));
    let mut l = ptr::null_mut();
    assert_ne!(
        unsafe { tropint_curve_period_matrix(cv, &mut l) },
        TropintStatus::Ok
    );
    unsafe { tropint_curve_free(cv) };

    let poly = c("min(2Y, Y+2X, Y+X+1, Y+4, 11X, 11)");
    assert_eq!(
        unsafe { tropint_curve_extract(poly.as_ptr(), &mut cv) },
        TropintStatus::Ok
    );
    assert_eq!(
        unsafe { tropint_curve_period_matrix(cv, &mut l) },
        TropintStatus::Ok
    );
    let mut genus = 0;
    assert_eq!(
        unsafe { tropint_lattice_genus(l, &mut genus) },
        TropintStatus::Ok
    );
    assert_eq!(genus, 2);
    unsafe {
        tropint_lattice_free(l);
        tropint_curve_free(cv);
    }
}

#[test]
fn dynamics() {
    let mut s = ptr::null_mut();
    let st = c("11100100000");
    assert_eq!(
        unsafe { tropint_bbs_step(st.as_ptr(), &mut s) },
        TropintStatus::Ok
    );
    assert_eq!(take(s), "00011011000");
    assert_eq!(
        unsafe { tropint_bbs_cj(st.as_ptr(), &mut s) },
        TropintStatus::Ok
    );
    assert_eq!(take(s), "(4, 1, 0, 0, 0, 0)");
    let mut period = 0u64;
    assert_eq!(
        unsafe { tropint_bbs_orbit_period(st.as_ptr(), 1000, &mut period) },
        TropintStatus::Ok
    );
    assert_eq!(period, 77);
    assert_eq!(
        unsafe { tropint_bbs_orbit_period(st.as_ptr(), 10, &mut period) },
        TropintStatus::Budget
    );

    let toda = c("1,2,2,3");
    assert_eq!(
        unsafe { tropint_toda_step(toda.as_ptr(), &mut s) },
        TropintStatus::Ok
    );
    assert_eq!(take(s), "(1, 3, 2, 2)");
}

#[test]
fn null_pointers_and_verify() {
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { tropint_bbs_step(ptr::null(), &mut s) },
        TropintStatus::NullPointer
    );
    assert_eq!(
        unsafe { tropint_lattice_genus(ptr::null(), ptr::null_mut()) },
        TropintStatus::NullPointer
    );
    unsafe { tropint_string_free(ptr::null_mut()) };

    assert_eq!(
        unsafe { tropint_verify(8, 1, 10, &mut s) },
        TropintStatus::Ok
    );
    assert!(take(s).starts_with("PASS"));
    assert_eq!(
        unsafe { tropint_verify(99, 1, 10, ptr::null_mut()) },
        TropintStatus::InvalidArgument
    );
}

/// Compiles a small C program against the generated header and the static library.
#[test]
fn header_compiles_and_links() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler, skipping");
        return;
    }
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libtropint_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built, skipping", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include <string.h>
#include "tropint.h"
int main(void) {
    char *out = NULL;
    if (tropint_bbs_step("11100100000", &out) != TROPINT_STATUS_OK) return 1;
    int ok = strcmp(out, "00011011000") == 0;
    tropint_string_free(out);
    if (tropint_bbs_step("1x", &out) != TROPINT_STATUS_PARSE) return 2;
    if (tropint_last_error() == NULL) return 3;
    return ok ? 0 : 4;
}
"#,
    )
    .unwrap();
    let bin = dir.path().join("main");
    let status = Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C build failed");
    assert_eq!(Command::new(&bin).status().unwrap().code(), Some(0));
}

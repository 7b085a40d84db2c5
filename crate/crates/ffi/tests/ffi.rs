use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use stabhom_ffi::*;

fn examples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/examples")
}

fn read(rel: &str) -> CString {
    CString::new(std::fs::read_to_string(examples().join(rel)).unwrap()).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(stabhom_last_error()) }.to_string_lossy().into_owned()
}

unsafe fn algebra(rel: &str) -> *mut StabhomAlgebra {
    let mut a = ptr::null_mut();
    assert_eq!(stabhom_algebra_parse(read(rel).as_ptr(), &mut a), StabhomStatus::Ok);
    a
}

unsafe fn module(a: *const StabhomAlgebra, rel: &str, right: bool) -> *mut StabhomModule {
    let mut m = ptr::null_mut();
    assert_eq!(stabhom_module_parse(a, read(rel).as_ptr(), right as i32, &mut m), StabhomStatus::Ok, "{}", last_error());
    m
}

#[test]
fn tor_and_stor_over_dual_numbers() {
    unsafe {
        let a = algebra("dual2.alg");
        let k = module(a, "dual2/k.mod", false);
        let kr = module(a, "dual2/k.mod", true);
        let mut d = 0;
        stabhom_algebra_dim(a, &mut d);
        assert_eq!(d, 2);
        for i in 0..5 {
            assert_eq!(stabhom_tor(kr, k, i, &mut d), StabhomStatus::Ok);
            assert_eq!(d, 1);
        }
        let mut strategy = StabhomStrategy::VanishByPd;
        assert_eq!(stabhom_stor(kr, k, -2, &mut d, &mut strategy), StabhomStatus::Ok);
        assert_eq!((d, strategy), (1, StabhomStrategy::TateResolution));
        let (mut v, mut finite) = (0, 0);
        assert_eq!(stabhom_gdim(k, &mut v, &mut finite), StabhomStatus::Ok);
        assert_eq!((v, finite), (0, 1));
        stabhom_module_free(k);
        stabhom_module_free(kr);
        stabhom_algebra_free(a);
    }
}

#[test]
fn not_computable_and_certificates_over_the_intro_ring() {
    unsafe {
        let a = algebra("intro.alg");
        let k = module(a, "intro/k.mod", false);
        let e = module(a, "intro/E.mod", false);
        let (mut d, mut s) = (0, StabhomStrategy::VanishByPd);
        assert_eq!(stabhom_stor(k, k, 0, &mut d, &mut s), StabhomStatus::NotComputable);
        assert!(last_error().contains("AtLeast"), "{}", last_error());
        assert_eq!(stabhom_stor(e, e, 1, &mut d, &mut s), StabhomStatus::Ok);
        assert_eq!((d, s), (0, StabhomStrategy::VanishById));
        assert!(last_error().is_empty());
        let (mut v, mut finite) = (0, 1);
        stabhom_pd(k, 4, &mut v, &mut finite);
        assert_eq!((v, finite), (5, 0));
        stabhom_id(e, 4, &mut v, &mut finite);
        assert_eq!((v, finite), (0, 1));
        let mut de = ptr::null_mut();
        assert_eq!(stabhom_module_dual(e, &mut de), StabhomStatus::Ok);
        stabhom_module_dim(de, &mut d);
        assert_eq!(d, 3);
        for m in [k, e, de] {
            stabhom_module_free(m);
        }
        stabhom_algebra_free(a);
    }
}

#[test]
fn errors_are_reported_not_raised() {
    unsafe {
        let mut a = ptr::null_mut();
        let bad = CString::new("p=4 dim=1\n").unwrap();
        assert_ne!(stabhom_algebra_parse(bad.as_ptr(), &mut a), StabhomStatus::Ok);
        assert!(a.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(stabhom_algebra_parse(ptr::null(), &mut a), StabhomStatus::NullPointer);
        assert_eq!(stabhom_algebra_dim(ptr::null(), ptr::null_mut()), StabhomStatus::NullPointer);
        let g = algebra("gf5.alg");
        let mut m = ptr::null_mut();
        assert_eq!(stabhom_module_parse(g, read("dual2/k.mod").as_ptr(), 0, &mut m), StabhomStatus::Parse);
        let up = algebra("upper.alg");
        let s1 = module(up, "upper/S1.mod", false);
        let mut d = 0;
        assert_eq!(stabhom_tor(s1, s1, 1, &mut d), StabhomStatus::InvalidInput);
        stabhom_module_free(s1);
        stabhom_algebra_free(up);
        stabhom_algebra_free(g);
        stabhom_algebra_free(ptr::null_mut());
    }
}

#[test]
fn verify_runs_over_a_manifest() {
    let manifest = CString::new(examples().join("ship.corpus").to_str().unwrap()).unwrap();
    let tag = CString::new("stor_balanced").unwrap();
    let (mut p, mut f, mut s) = (0, 0, 0);
    let status = unsafe { stabhom_verify(manifest.as_ptr(), tag.as_ptr(), -2, 2, &mut p, &mut f, &mut s) };
    assert_eq!(status, StabhomStatus::Ok);
    assert!(p > 0);
    assert_eq!(f, 0);
    let bogus = CString::new("nonsense").unwrap();
    let status = unsafe { stabhom_verify(manifest.as_ptr(), bogus.as_ptr(), 0, 0, &mut p, &mut f, &mut s) };
    assert_eq!(status, StabhomStatus::InvalidInput);
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(stabhom_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "stabhom.h"

int main(void) {
    const char *alg = "p=2 dim=2\nmul 0 0 = 0:1\nmul 0 1 = 1:1\nmul 1 0 = 1:1\nunit = 0:1\nradical = 0 1\n";
    const char *k = "dim=1\naction 0 =\n1\naction 1 =\n0\n";
    StabhomAlgebra *a = NULL;
    StabhomModule *m = NULL, *n = NULL;
    if (stabhom_algebra_parse(alg, &a) != STABHOM_STATUS_OK) return 10;
    if (stabhom_module_parse(a, k, 1, &m) != STABHOM_STATUS_OK) return 11;
    if (stabhom_module_parse(a, k, 0, &n) != STABHOM_STATUS_OK) return 12;
    size_t d = 0;
    enum StabhomStrategy s;
    if (stabhom_stor(m, n, -3, &d, &s) != STABHOM_STATUS_OK || d != 1) return 13;
    StabhomAlgebra *bad = NULL;
    if (stabhom_algebra_parse("p=4 dim=1\n", &bad) == STABHOM_STATUS_OK || stabhom_last_error()[0] == 0) return 14;
    printf("%s %zu\n", stabhom_version(), d);
    stabhom_module_free(m);
    stabhom_module_free(n);
    stabhom_algebra_free(a);
    return 0;
}
"#;

/// Compiles a C client against the generated header and the static library.
#[test]
fn c_client_links_against_the_static_library() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libstabhom_ffi.a");
    assert!(lib.exists(), "static library not built at {}", lib.display());
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = dir.join("client.c");
    let exe = dir.join("client");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let out = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "client exited {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), format!("{} 1", env!("CARGO_PKG_VERSION")));
}

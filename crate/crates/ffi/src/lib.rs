//! C interface to `stabhom`.
//!
//! Algebras and modules cross the boundary as opaque handles created by the
//! `*_parse` functions and released by the matching `*_free`. Every function
//! returns a [`StabhomStatus`]; on failure `stabhom_last_error` describes the
//! error on the calling thread until the next call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use stabhom::algebra::Algebra;
use stabhom::detect::{verify_theorem, Corpus, TheoremTag};
use stabhom::io::{parse_algebra, parse_module};
use stabhom::module::FdModule;
use stabhom::resolution::DimCertificate;
use stabhom::stable::{Strategy, Verdict, Workbench};
use stabhom::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabhomStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    NotComputable = 5,
    Precondition = 6,
    Internal = 7,
    Panic = 8,
}

/// How a stable homology value was obtained.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabhomStrategy {
    VanishByPd = 0,
    VanishById = 1,
    TateResolution = 2,
    OppositeBalance = 3,
}

/// Opaque algebra handle.
pub struct StabhomAlgebra {
    algebra: Algebra,
}

/// Opaque module handle; carries the algebra it is a module over.
pub struct StabhomModule {
    module: FdModule,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> StabhomStatus {
    match e {
        Error::Parse { .. } => StabhomStatus::Parse,
        Error::NotComputable(_) | Error::WindowInsufficient { .. } => StabhomStatus::NotComputable,
        Error::Precondition(_) => StabhomStatus::Precondition,
        Error::ConstructionInvariant(_) => StabhomStatus::Internal,
        _ => StabhomStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), StabhomStatus>) -> StabhomStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            StabhomStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside stabhom");
            StabhomStatus::Panic
        }
    }
}

fn fail(e: Error) -> StabhomStatus {
    set_error(&e.to_string());
    status_of(&e)
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, StabhomStatus> {
    if p.is_null() {
        set_error("null string");
        return Err(StabhomStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string is not UTF-8");
        StabhomStatus::InvalidUtf8
    })
}

unsafe fn reference<'a, T>(p: *const T) -> Result<&'a T, StabhomStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle");
        StabhomStatus::NullPointer
    })
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), StabhomStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(StabhomStatus::NullPointer);
    }
    out.write(v);
    Ok(())
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn stabhom_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `source` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stabhom_algebra_parse(source: *const c_char, out: *mut *mut StabhomAlgebra) -> StabhomStatus {
    guard(|| {
        let algebra = parse_algebra(text(source)?).map_err(fail)?;
        write(out, Box::into_raw(Box::new(StabhomAlgebra { algebra })))
    })
}

/// # Safety
/// `a` must come from `stabhom_algebra_parse` or be null; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn stabhom_algebra_free(a: *mut StabhomAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stabhom_algebra_dim(a: *const StabhomAlgebra, out: *mut usize) -> StabhomStatus {
    guard(|| write(out, reference(a)?.algebra.dim()))
}

/// Parses a module over `a` (`right == 0`) or over its opposite (`right != 0`).
///
/// # Safety
/// `a` must be a live handle, `source` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn stabhom_module_parse(
    a: *const StabhomAlgebra,
    source: *const c_char,
    right: i32,
    out: *mut *mut StabhomModule,
) -> StabhomStatus {
    guard(|| {
        let a = &reference(a)?.algebra;
        let over = if right != 0 { a.opposite() } else { a.clone() };
        let module = parse_module(text(source)?, &over).map_err(fail)?;
        write(out, Box::into_raw(Box::new(StabhomModule { module })))
    })
}

/// # Safety
/// `m` must come from `stabhom_module_parse` or `stabhom_module_dual`, or be null.
#[no_mangle]
pub unsafe extern "C" fn stabhom_module_free(m: *mut StabhomModule) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stabhom_module_dim(m: *const StabhomModule, out: *mut usize) -> StabhomStatus {
    guard(|| write(out, reference(m)?.module.dim()))
}

/// `D(m)`, a module over the opposite algebra.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stabhom_module_dual(m: *const StabhomModule, out: *mut *mut StabhomModule) -> StabhomStatus {
    guard(|| {
        let module = reference(m)?.module.dual();
        write(out, Box::into_raw(Box::new(StabhomModule { module })))
    })
}

/// `dim Tor_i(m, n)` with `m` over the opposite algebra and `n` over the algebra.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stabhom_tor(m: *const StabhomModule, n: *const StabhomModule, i: i64, out: *mut usize) -> StabhomStatus {
    guard(|| {
        let d = Workbench::default().tor(&reference(m)?.module, &reference(n)?.module, i).map_err(fail)?;
        write(out, d)
    })
}

/// `dim Ext^i(m, n)` for `m` and `n` over the same algebra.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stabhom_ext(m: *const StabhomModule, n: *const StabhomModule, i: i64, out: *mut usize) -> StabhomStatus {
    guard(|| {
        let d = Workbench::default().ext(&reference(m)?.module, &reference(n)?.module, i).map_err(fail)?;
        write(out, d)
    })
}

/// `dim Stor_i(m, n)`. Returns `NotComputable` when no certificate applies.
///
/// # Safety
/// Handles must be live; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn stabhom_stor(
    m: *const StabhomModule,
    n: *const StabhomModule,
    i: i64,
    out_dim: *mut usize,
    out_strategy: *mut StabhomStrategy,
) -> StabhomStatus {
    guard(|| {
        let s = Workbench::default().stor(&reference(m)?.module, &reference(n)?.module, i).map_err(fail)?;
        let (Some(d), Some(strategy)) = (s.dimension(), s.strategy()) else {
            let reasons: Vec<String> = s.certificates.iter().map(ToString::to_string).collect();
            set_error(&format!("not computable: {}", reasons.join("; ")));
            return Err(StabhomStatus::NotComputable);
        };
        write(out_dim, d)?;
        write(
            out_strategy,
            match strategy {
                Strategy::VanishByPd => StabhomStrategy::VanishByPd,
                Strategy::VanishById => StabhomStrategy::VanishById,
                Strategy::TateResolution => StabhomStrategy::TateResolution,
                Strategy::OppositeBalance => StabhomStrategy::OppositeBalance,
            },
        )
    })
}

unsafe fn certificate(c: DimCertificate, value: *mut usize, finite: *mut i32) -> Result<(), StabhomStatus> {
    let (v, f) = match c {
        DimCertificate::Finite(n) => (n, 1),
        DimCertificate::AtLeast(n) => (n, 0),
    };
    write(value, v)?;
    write(finite, f)
}

/// Projective dimension searched up to `bound`: `*finite = 1` with the exact
/// value, or `*finite = 0` with a lower bound.
///
/// # Safety
/// `m` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn stabhom_pd(m: *const StabhomModule, bound: usize, value: *mut usize, finite: *mut i32) -> StabhomStatus {
    guard(|| certificate(stabhom::resolution::pd_certificate(&reference(m)?.module, bound), value, finite))
}

/// Injective dimension, reported like `stabhom_pd`.
///
/// # Safety
/// `m` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn stabhom_id(m: *const StabhomModule, bound: usize, value: *mut usize, finite: *mut i32) -> StabhomStatus {
    guard(|| certificate(stabhom::resolution::id_certificate(&reference(m)?.module, bound), value, finite))
}

/// G-dimension with default search bounds, reported like `stabhom_pd`.
///
/// # Safety
/// `m` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn stabhom_gdim(m: *const StabhomModule, value: *mut usize, finite: *mut i32) -> StabhomStatus {
    guard(|| certificate(Workbench::default().gdim(&reference(m)?.module).dim(), value, finite))
}

/// Runs one theorem tag (or `"all"`) over a corpus manifest on degrees `[lo, hi]`.
///
/// # Safety
/// Strings must be NUL-terminated; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn stabhom_verify(
    manifest: *const c_char,
    tag: *const c_char,
    lo: i64,
    hi: i64,
    passed: *mut usize,
    failed: *mut usize,
    skipped: *mut usize,
) -> StabhomStatus {
    guard(|| {
        let corpus = Corpus::load(Path::new(text(manifest)?)).map_err(fail)?;
        let tag = text(tag)?;
        let tags: Vec<TheoremTag> = if tag == "all" { TheoremTag::ALL.to_vec() } else { vec![tag.parse().map_err(fail)?] };
        let wb = Workbench::default();
        let (mut p, mut f, mut s) = (0, 0, 0);
        for t in tags {
            for i in verify_theorem(t, &corpus, &wb, lo, hi).map_err(fail)?.instances {
                match i.verdict {
                    Verdict::Pass => p += 1,
                    Verdict::Fail => f += 1,
                    Verdict::Skipped(_) => s += 1,
                }
            }
        }
        write(passed, p)?;
        write(failed, f)?;
        write(skipped, s)
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn stabhom_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

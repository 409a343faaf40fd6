//! C interface to `tropint`.
//!
//! Every call returns a [`TropintStatus`]. On failure the message is kept
//! per thread and read with [`tropint_last_error`]. Strings handed out by
//! the library are released with [`tropint_string_free`]; handles with
//! their own `_free`. Rationals cross the boundary as text (`"p"` or
//! `"p/q"`, lists comma separated).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tropint::bbs::{self, BbsState};
use tropint::curve::{extract_curve, face_basis, gram, TropCurve};
use tropint::minplus::{theta_eval, PeriodLattice, TropPoly2};
use tropint::rat::{fmt_rat, fmt_vec, parse_rat_list};
use tropint::toda::{self, TodaState};
use tropint::verify::{self, VerifyConfig};
use tropint::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TropintStatus {
    Ok = 0,
    NullPointer = 1,
    /// Malformed text input or a non-UTF-8 string.
    Parse = 2,
    /// Well-formed input outside the domain of the operation.
    InvalidArgument = 3,
    Budget = 4,
    /// A check ran and failed, or no solution exists.
    Failed = 5,
    Internal = 6,
    Panic = 7,
}

/// A period matrix `Ω`.
pub struct TropintLattice(PeriodLattice);

/// An extracted tropical plane curve.
pub struct TropintCurve(TropCurve);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TropintStatus {
    match e {
        Error::Parse(_) => TropintStatus::Parse,
        Error::Budget { .. } => TropintStatus::Budget,
        Error::NoMatch(_) | Error::MultipleMatches { .. } => TropintStatus::Failed,
        Error::Internal(_) => TropintStatus::Internal,
        _ => TropintStatus::InvalidArgument,
    }
}

struct Fail(TropintStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

type FfiResult<T> = std::result::Result<T, Fail>;

fn guard(f: impl FnOnce() -> FfiResult<()>) -> TropintStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TropintStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            TropintStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(TropintStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(TropintStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> FfiResult<()> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    let c = CString::new(s).map_err(|_| Fail(TropintStatus::Internal, "nul in output".into()))?;
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(c.into_raw());
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn tropint_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` is null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tropint_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds `Ω` from `g * g` row-major integer entries.
///
/// # Safety
/// `entries` points to `g * g` values; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tropint_lattice_new(
    entries: *const i64,
    g: usize,
    out: *mut *mut TropintLattice,
) -> TropintStatus {
    guard(|| {
        if entries.is_null() {
            return Err(null("entries"));
        }
        if g == 0 {
            return Err(Fail(TropintStatus::InvalidArgument, "genus 0".into()));
        }
        let flat = std::slice::from_raw_parts(entries, g * g);
        let rows: Vec<&[i64]> = flat.chunks(g).collect();
        let l = PeriodLattice::from_ints(&rows)?;
        put(out, Box::into_raw(Box::new(TropintLattice(l))), "out")
    })
}

/// # Safety
/// `l` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tropint_lattice_free(l: *mut TropintLattice) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// # Safety
/// `l` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tropint_lattice_genus(
    l: *const TropintLattice,
    out: *mut usize,
) -> TropintStatus {
    guard(|| {
        let l = l.as_ref().ok_or_else(|| null("lattice"))?;
        put(out, l.0.genus(), "out")
    })
}

/// `Θ(Z; Ω)` as text. `minimizers` receives the number of minimizing `n`
/// when not null.
///
/// # Safety
/// `l` is a live handle, `z` a C string, `value` writable.
#[no_mangle]
pub unsafe extern "C" fn tropint_theta(
    l: *const TropintLattice,
    z: *const c_char,
    value: *mut *mut c_char,
    minimizers: *mut usize,
) -> TropintStatus {
    guard(|| {
        let l = l.as_ref().ok_or_else(|| null("lattice"))?;
        let z = parse_rat_list(text(z, "z")?)?;
        let t = theta_eval(&l.0, &z)?;
        if !minimizers.is_null() {
            minimizers.write(t.minimizers.len());
        }
        put_string(value, fmt_rat(&t.value))
    })
}

/// Reduces `Z` into the fundamental domain of `R^g / Ω Z^g`.
///
/// # Safety
/// As for [`tropint_theta`].
#[no_mangle]
pub unsafe extern "C" fn tropint_torus_reduce(
    l: *const TropintLattice,
    z: *const c_char,
    out: *mut *mut c_char,
) -> TropintStatus {
    guard(|| {
        let l = l.as_ref().ok_or_else(|| null("lattice"))?;
        let p = l.0.reduce(&parse_rat_list(text(z, "z")?)?)?;
        put_string(out, fmt_vec(p.rep()))
    })
}

/// Corner locus of a polynomial such as `"min(X, Y, 1)"`.
///
/// # Safety
/// `poly` is a C string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tropint_curve_extract(
    poly: *const c_char,
    out: *mut *mut TropintCurve,
) -> TropintStatus {
    guard(|| {
        let f: TropPoly2 = text(poly, "poly")?.parse()?;
        let c = extract_curve(&f)?;
        put(out, Box::into_raw(Box::new(TropintCurve(c))), "out")
    })
}

/// # Safety
/// `c` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tropint_curve_free(c: *mut TropintCurve) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `c` is a live handle; every non-null output is writable.
#[no_mangle]
pub unsafe extern "C" fn tropint_curve_counts(
    c: *const TropintCurve,
    vertices: *mut usize,
    edges: *mut usize,
    genus: *mut usize,
) -> TropintStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("curve"))?;
        for (p, v) in [
            (vertices, c.0.vertices().len()),
            (edges, c.0.edges().len()),
            (genus, c.0.genus()),
        ] {
            if !p.is_null() {
                p.write(v);
            }
        }
        Ok(())
    })
}

/// # Safety
/// `c` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tropint_curve_json(
    c: *const TropintCurve,
    out: *mut *mut c_char,
) -> TropintStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("curve"))?;
        put_string(out, c.0.to_json().to_string())
    })
}

/// Period matrix of the face basis as a new lattice handle.
///
/// # Safety
/// `c` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tropint_curve_period_matrix(
    c: *const TropintCurve,
    out: *mut *mut TropintLattice,
) -> TropintStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("curve"))?;
        let l = gram(&c.0, &face_basis(&c.0)?)?;
        put(out, Box::into_raw(Box::new(TropintLattice(l))), "out")
    })
}

/// One Toda step on interleaved `Q1,W1,...,QN,WN`.
///
/// # Safety
/// `state` is a C string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tropint_toda_step(
    state: *const c_char,
    out: *mut *mut c_char,
) -> TropintStatus {
    guard(|| {
        let s = TodaState::from_interleaved(&parse_rat_list(text(state, "state")?)?)?;
        put_string(out, fmt_vec(&toda::toda_step(&s).interleaved()))
    })
}

fn bbs_state(s: &str) -> FfiResult<BbsState> {
    Ok(s.parse::<BbsState>()?)
}

/// One box-ball step on a `0`/`1` string.
///
/// # Safety
/// `state` is a C string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tropint_bbs_step(
    state: *const c_char,
    out: *mut *mut c_char,
) -> TropintStatus {
    guard(|| {
        let s = bbs_state(text(state, "state")?)?;
        put_string(out, bbs::bbs_step(&s).0.to_string())
    })
}

/// Conserved `C_0, ..., C_M` of a `0`/`1` string or a rational list.
///
/// # Safety
/// `state` is a C string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tropint_bbs_cj(
    state: *const c_char,
    out: *mut *mut c_char,
) -> TropintStatus {
    guard(|| {
        let t = text(state, "state")?;
        let s = match t.parse::<BbsState>() {
            Ok(b) => b.to_kdv(),
            Err(_) => bbs::KdvState::new(parse_rat_list(t)?)?,
        };
        put_string(out, fmt_vec(&bbs::bbs_cj(&s)))
    })
}

/// Orbit length under the box-ball step; `Budget` past `limit` steps.
///
/// # Safety
/// `state` is a C string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tropint_bbs_orbit_period(
    state: *const c_char,
    limit: u64,
    out: *mut u64,
) -> TropintStatus {
    guard(|| {
        let s = bbs_state(text(state, "state")?)?;
        let p = bbs::orbit_period(&s, limit.into())?;
        let p = u64::try_from(p)
            .map_err(|_| Fail(TropintStatus::Internal, "period overflows u64".into()))?;
        put(out, p, "out")
    })
}

/// Runs acceptance criterion `id`. Returns `Failed` when the check fails;
/// `line` receives the report either way when not null.
///
/// # Safety
/// `line` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn tropint_verify(
    id: u32,
    seed: u64,
    cases: usize,
    line: *mut *mut c_char,
) -> TropintStatus {
    guard(|| {
        let id = id as usize;
        if !(1..=verify::CRITERIA).contains(&id) {
            return Err(Fail(
                TropintStatus::InvalidArgument,
                format!("no criterion {id}"),
            ));
        }
        let cfg = VerifyConfig {
            seed,
            cases,
            ..VerifyConfig::default()
        };
        let check = verify::run(id, &cfg);
        if !line.is_null() {
            put_string(line, check.line())?;
        }
        match (check.pass, check.budget) {
            (true, _) => Ok(()),
            (false, true) => Err(Fail(TropintStatus::Budget, check.line())),
            (false, false) => Err(Fail(TropintStatus::Failed, check.line())),
        }
    })
}

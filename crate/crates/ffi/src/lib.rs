//! C interface to the exact checks. Handles are opaque; every call returns a
//! [`CmStatus`] and the message of the last failure on this thread is
//! available from [`cm_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use conifold_mirror::algebra::Rational;
use conifold_mirror::checks::{self, CheckReport};
use conifold_mirror::curve::KnotParams;
use conifold_mirror::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmStatus {
    Ok = 0,
    /// A check ran and found a mismatch; the report is still returned.
    Mismatch = 1,
    InvalidParams = 2,
    Degenerate = 3,
    Unsupported = 4,
    NullPointer = 5,
    Internal = 6,
    Panic = 7,
}

/// Knot parameters `(p, r, s)`.
pub struct CmParams(KnotParams);

/// Outcome of one check.
pub struct CmReport(CheckReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CmStatus {
    match e {
        Error::InvalidParams(_) | Error::Parse(_) | Error::Unstable(..) => CmStatus::InvalidParams,
        Error::Degenerate(_) => CmStatus::Degenerate,
        Error::Unsupported(_) => CmStatus::Unsupported,
        _ => CmStatus::Internal,
    }
}

fn guard<T>(out: *mut *mut T, f: impl FnOnce() -> Result<T, Error>) -> (CmStatus, Option<*mut T>) {
    if out.is_null() {
        set_error("null output pointer");
        return (CmStatus::NullPointer, None);
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => {
            let p = Box::into_raw(Box::new(v));
            // SAFETY: checked non-null above
            unsafe { *out = p };
            (CmStatus::Ok, Some(p))
        }
        Ok(Err(e)) => {
            set_error(&e.to_string());
            (status_of(&e), None)
        }
        Err(_) => {
            set_error("panic inside the library");
            (CmStatus::Panic, None)
        }
    }
}

fn run_check(out: *mut *mut CmReport, f: impl FnOnce() -> Result<CheckReport, Error>) -> CmStatus {
    let (status, p) = guard(out, || f().map(CmReport));
    match p {
        // SAFETY: freshly boxed by guard
        Some(p) if !unsafe { &*p }.0.passed() => CmStatus::Mismatch,
        _ => status,
    }
}

/// Message of the last failed call on this thread. Owned by the library.
#[no_mangle]
pub extern "C" fn cm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cm_params_new(p: i64, r: i64, s: i64, out: *mut *mut CmParams) -> CmStatus {
    guard(out, || KnotParams::new(p, r, s).map(CmParams)).0
}

/// # Safety
/// `params` must come from [`cm_params_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn cm_params_free(params: *mut CmParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

macro_rules! params_ref {
    ($p:expr) => {{
        if $p.is_null() {
            set_error("null params");
            return CmStatus::NullPointer;
        }
        &(*$p).0
    }};
}

/// Disk potential against the curve.
///
/// # Safety
/// `params` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cm_check_disk(
    params: *const CmParams,
    q_order: u32,
    x_order: u32,
    out: *mut *mut CmReport,
) -> CmStatus {
    let kp = params_ref!(params);
    run_check(out, || checks::check_disk(kp, q_order, x_order))
}

/// Both routes to the curve parametrization.
///
/// # Safety
/// As for [`cm_check_disk`].
#[no_mangle]
pub unsafe extern "C" fn cm_check_v_routes(
    params: *const CmParams,
    q_order: u32,
    eta_order: u32,
    out: *mut *mut CmReport,
) -> CmStatus {
    let kp = params_ref!(params);
    run_check(out, || checks::check_v_routes(kp, q_order, eta_order))
}

/// Graph sum against the recursion at `q = q_num / q_den`.
///
/// # Safety
/// As for [`cm_check_disk`].
#[no_mangle]
pub unsafe extern "C" fn cm_check_graphsum(
    params: *const CmParams,
    g: u32,
    n: u32,
    q_num: i64,
    q_den: i64,
    out: *mut *mut CmReport,
) -> CmStatus {
    let kp = params_ref!(params);
    if q_den == 0 {
        set_error("zero denominator");
        return CmStatus::InvalidParams;
    }
    let q = Rational::new(q_num.into(), q_den.into());
    run_check(out, || checks::check_graphsum(kp, g, n as usize, &q))
}

/// # Safety
/// As for [`cm_check_disk`].
#[no_mangle]
pub unsafe extern "C" fn cm_check_rmatrix(params: *const CmParams, z_order: u32, out: *mut *mut CmReport) -> CmStatus {
    let kp = params_ref!(params);
    run_check(out, || checks::check_rmatrix(kp, z_order))
}

/// # Safety
/// As for [`cm_check_disk`].
#[no_mangle]
pub unsafe extern "C" fn cm_check_annulus_q0(
    params: *const CmParams,
    o1: u32,
    o2: u32,
    out: *mut *mut CmReport,
) -> CmStatus {
    let kp = params_ref!(params);
    run_check(out, || checks::check_annulus_q0(kp, o1, o2))
}

/// Intersection numbers against the Airy recursion.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cm_check_airy(g: u32, n: u32, out: *mut *mut CmReport) -> CmStatus {
    run_check(out, || checks::check_airy(g, n as usize))
}

/// 1 on pass, 0 on mismatch, -1 for a null handle.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cm_report_passed(report: *const CmReport) -> i32 {
    match report.as_ref() {
        Some(r) => r.0.passed() as i32,
        None => -1,
    }
}

/// JSON of the report; release with [`cm_string_free`]. Null for a null handle.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cm_report_json(report: *const CmReport) -> *mut c_char {
    let Some(r) = report.as_ref() else {
        set_error("null report");
        return ptr::null_mut();
    };
    let s = serde_json::to_string(&r.0).expect("plain data");
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// # Safety
/// `report` must come from a check function or be null.
#[no_mangle]
pub unsafe extern "C" fn cm_report_free(report: *mut CmReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must come from [`cm_report_json`] or be null.
#[no_mangle]
pub unsafe extern "C" fn cm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// SPDX-License-Identifier: Apache-2.0

//! C ABI over `effcone`.
//!
//! Every function returns an `EffconeStatus`. On anything but `OK` and
//! `CHECK_FAILED` a message is kept per thread and can be read with
//! `effcone_last_error`. Strings returned through `char **` out-parameters
//! are owned by the caller and released with `effcone_string_free`;
//! certificates are released with `effcone_certificate_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use effcone::arith::make_ext_field;
use effcone::curves::{EllipticCurve, HyperellipticCurve};
use effcone::enumerative::{theta_degree, verify_finite_degree};
use effcone::injectivity::{check_certificate, verify_injectivity, KernelCertificate, Source};
use effcone::strata::{count_x, StrataQuery, DEFAULT_STRATA_BOUND};
use effcone::twisted::TwistInput;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffconeStatus {
    /// The call succeeded and every check it ran passed.
    Ok = 0,
    /// The call succeeded but a verification failed; outputs are valid.
    CheckFailed = 1,
    InvalidArgument = 2,
    NullPointer = 3,
    InvalidUtf8 = 4,
    /// A panic was caught at the boundary.
    Internal = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffconeSource {
    Displayed = 0,
    Table = 1,
}

/// Opaque kernel certificate.
pub struct EffconeCertificate(KernelCertificate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

type Res<T> = Result<T, (EffconeStatus, String)>;

fn invalid<E: std::fmt::Display>(e: E) -> (EffconeStatus, String) {
    (EffconeStatus::InvalidArgument, e.to_string())
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Res<EffconeStatus>) -> EffconeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, m))) => {
            set_error(m);
            s
        }
        Err(p) => {
            let m = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {m}"));
            EffconeStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Res<&'a str> {
    if s.is_null() {
        return Err((EffconeStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|e| (EffconeStatus::InvalidUtf8, e.to_string()))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Res<()> {
    if out.is_null() {
        return Err((EffconeStatus::NullPointer, "null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Res<()> {
    let c = CString::new(s).map_err(|e| (EffconeStatus::Internal, e.to_string()))?;
    write_out(out, c.into_raw())
}

fn verdict(pass: bool) -> EffconeStatus {
    if pass {
        EffconeStatus::Ok
    } else {
        EffconeStatus::CheckFailed
    }
}

/// Message for the last failed call on this thread, or NULL. Valid until
/// the next call on the same thread.
#[no_mangle]
pub extern "C" fn effcone_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn effcone_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the system for `(g, n)`, computes its kernel and returns a
/// certificate. `CHECK_FAILED` means the kernel is nontrivial.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn effcone_injectivity_certify(
    g: u32,
    n: u32,
    source: EffconeSource,
    out: *mut *mut EffconeCertificate,
) -> EffconeStatus {
    guard(|| {
        let source = match source {
            EffconeSource::Displayed => Source::Displayed,
            EffconeSource::Table => Source::Table,
        };
        let cert = verify_injectivity(g, n, source).map_err(invalid)?;
        let pass = cert.is_injective();
        write_out(out, Box::into_raw(Box::new(EffconeCertificate(cert))))?;
        Ok(verdict(pass))
    })
}

/// Kernel dimension recorded in the certificate.
///
/// # Safety
/// `cert` must be a live certificate or NULL (which yields `SIZE_MAX`).
#[no_mangle]
pub unsafe extern "C" fn effcone_certificate_kernel_dim(cert: *const EffconeCertificate) -> usize {
    cert.as_ref().map_or(usize::MAX, |c| c.0.kernel_dim)
}

/// Replays the certificate's elimination trace against a rebuilt system.
///
/// # Safety
/// `cert` must be a live certificate.
#[no_mangle]
pub unsafe extern "C" fn effcone_certificate_check(cert: *const EffconeCertificate) -> EffconeStatus {
    guard(|| {
        let c = cert.as_ref().ok_or((EffconeStatus::NullPointer, "null certificate".into()))?;
        match check_certificate(&c.0) {
            Ok(()) => Ok(EffconeStatus::Ok),
            Err(e) => {
                set_error(e.to_string());
                Ok(EffconeStatus::CheckFailed)
            }
        }
    })
}

/// Certificate as JSON.
///
/// # Safety
/// `cert` must be a live certificate and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn effcone_certificate_to_json(
    cert: *const EffconeCertificate,
    out: *mut *mut c_char,
) -> EffconeStatus {
    guard(|| {
        let c = cert.as_ref().ok_or((EffconeStatus::NullPointer, "null certificate".into()))?;
        write_string(out, c.0.to_json())?;
        Ok(EffconeStatus::Ok)
    })
}

/// # Safety
/// `cert` must come from this library and not be freed twice. NULL is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn effcone_certificate_free(cert: *mut EffconeCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// `g! ∏ m_i²` as a decimal string; `len` must equal `g`.
///
/// # Safety
/// `mults` must point to `len` integers and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn effcone_theta_degree(
    g: u32,
    mults: *const i64,
    len: usize,
    out: *mut *mut c_char,
) -> EffconeStatus {
    guard(|| {
        let ms: &[i64] = if len == 0 {
            &[]
        } else if mults.is_null() {
            return Err((EffconeStatus::NullPointer, "null multiplier array".into()));
        } else {
            std::slice::from_raw_parts(mults, len)
        };
        let d = theta_degree(g, ms).map_err(invalid)?;
        write_string(out, d.to_string())?;
        Ok(EffconeStatus::Ok)
    })
}

/// Fiber-count report for `y² = f(x)` over `F_{p^ext}` as JSON.
///
/// # Safety
/// `f` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn effcone_fiber_report(
    p: u32,
    ext_degree: u32,
    f: *const c_char,
    d1: i64,
    d2: i64,
    kmax: u32,
    samples: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> EffconeStatus {
    guard(|| {
        let k = make_ext_field(p, ext_degree).map_err(invalid)?;
        let curve = HyperellipticCurve::parse(&k, read_str(f)?).map_err(invalid)?;
        let report = verify_finite_degree(&curve, d1, d2, samples, kmax, seed).map_err(invalid)?;
        write_string(out, report.to_json())?;
        Ok(verdict(report.passes()))
    })
}

/// Number of rational points of `X(d^1..d^m)` on `y² = x³ + a x + b`;
/// `signatures` is a JSON list of integer lists.
///
/// # Safety
/// `signatures` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn effcone_strata_count(
    p: u32,
    ext_degree: u32,
    a: i64,
    b: i64,
    signatures: *const c_char,
    out: *mut u64,
) -> EffconeStatus {
    guard(|| {
        let k = make_ext_field(p, ext_degree).map_err(invalid)?;
        let curve = EllipticCurve::from_ints(&k, a, b).map_err(invalid)?;
        let query = StrataQuery::from_json(read_str(signatures)?).map_err(invalid)?;
        let n = count_x(&query, &curve, DEFAULT_STRATA_BOUND).map_err(invalid)?;
        write_out(out, n)?;
        Ok(EffconeStatus::Ok)
    })
}

/// Checks a graph given as JSON (same format as the CLI) and returns the
/// report as JSON.
///
/// # Safety
/// `graph_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn effcone_twist_check(graph_json: *const c_char, out: *mut *mut c_char) -> EffconeStatus {
    guard(|| {
        let report = TwistInput::from_json(read_str(graph_json)?).and_then(|i| i.run()).map_err(invalid)?;
        let json = serde_json::to_string_pretty(&report).map_err(|e| (EffconeStatus::Internal, e.to_string()))?;
        write_string(out, json)?;
        Ok(verdict(report.passed))
    })
}

//! C ABI over `cylinderlab`.
//!
//! Weights and certificates are opaque heap handles released with their
//! `_free` function. Every call returns a [`ClStatus`]; results come back
//! through out-pointers. Strings returned by the library are released with
//! [`cl_string_free`]. On failure a description is kept per thread and read
//! with [`cl_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cylinderlab::lift::ZCertificateJson;
use cylinderlab::structure::is_cylinder;
use cylinderlab::weight::WeightJson;
use cylinderlab::{
    lift_multiset, lift_set, verify_certificate, Error, PrimeModulus, WeightZ, ZCertificate,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClStatus {
    Ok = 0,
    /// The call succeeded and the queried predicate is false.
    False = 1,
    NullPointer = 2,
    InvalidArgument = 3,
    NotPrime = 4,
    WrongLength = 5,
    PreconditionViolated = 6,
    SizeViolation = 7,
    NotAMultiset = 8,
    LiftObstruction = 9,
    Parse = 10,
    Internal = 11,
}

/// Integer weight on `F_p^3`.
pub struct ClWeight(WeightZ);

/// Integer lift certificate.
pub struct ClCertificate(ZCertificate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: ClStatus, msg: impl Into<String>) -> ClStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> ClStatus {
    let status = match e {
        Error::NotPrime(_) => ClStatus::NotPrime,
        Error::WrongLength { .. } => ClStatus::WrongLength,
        Error::PreconditionViolated { .. } => ClStatus::PreconditionViolated,
        Error::SizeViolation { .. } => ClStatus::SizeViolation,
        Error::NotAMultiset { .. } => ClStatus::NotAMultiset,
        Error::LiftObstruction { .. } => ClStatus::LiftObstruction,
        Error::Parse(_) => ClStatus::Parse,
        _ => ClStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> ClStatus) -> ClStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(ClStatus::Internal, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, ClStatus> {
    if s.is_null() {
        return Err(fail(ClStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(ClStatus::Parse, "string is not UTF-8"))
}

fn emit_string(s: String, out: *mut *mut c_char) -> ClStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            ClStatus::Ok
        }
        Err(_) => fail(ClStatus::Internal, "interior nul in output"),
    }
}

macro_rules! nonnull {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(ClStatus::NullPointer, concat!(stringify!($p), " is null"));
        })+
    };
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a weight from `len = p^3` values in point-index order.
///
/// # Safety
/// `values` must point to `len` readable `int64_t`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_weight_new(
    p: u32,
    values: *const i64,
    len: usize,
    out: *mut *mut ClWeight,
) -> ClStatus {
    guard(|| {
        nonnull!(out);
        if len > 0 {
            nonnull!(values);
        }
        let m = match PrimeModulus::new(p) {
            Ok(m) => m,
            Err(e) => return from_error(e),
        };
        let v = if len == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(values, len).to_vec()
        };
        match WeightZ::from_values(m, v) {
            Ok(w) => {
                *out = Box::into_raw(Box::new(ClWeight(w)));
                ClStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Parses `{"p": .., "values": [..]}`.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_weight_from_json(
    json: *const c_char,
    out: *mut *mut ClWeight,
) -> ClStatus {
    guard(|| {
        nonnull!(out);
        let s = match read_str(json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let j: WeightJson = match serde_json::from_str(s) {
            Ok(j) => j,
            Err(e) => return fail(ClStatus::Parse, e.to_string()),
        };
        match WeightZ::try_from(j) {
            Ok(w) => {
                *out = Box::into_raw(Box::new(ClWeight(w)));
                ClStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `w` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cl_weight_free(w: *mut ClWeight) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Number of values (`p^3`).
///
/// # Safety
/// `w` must be a live handle; `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_weight_len(w: *const ClWeight, out_len: *mut usize) -> ClStatus {
    guard(|| {
        nonnull!(w, out_len);
        *out_len = (*w).0.values().len();
        ClStatus::Ok
    })
}

/// Copies the values into `buf`, which must hold exactly `len` entries.
///
/// # Safety
/// `w` must be a live handle; `buf` must have room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn cl_weight_values(
    w: *const ClWeight,
    buf: *mut i64,
    len: usize,
) -> ClStatus {
    guard(|| {
        nonnull!(w, buf);
        let v = (*w).0.values();
        if len != v.len() {
            return from_error(Error::WrongLength {
                expected: v.len(),
                got: len,
            });
        }
        ptr::copy_nonoverlapping(v.as_ptr(), buf, len);
        ClStatus::Ok
    })
}

/// `Ok` if every plane sum is divisible by p, `False` otherwise.
///
/// # Safety
/// `w` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cl_weight_is_p_divisible(w: *const ClWeight) -> ClStatus {
    guard(|| {
        nonnull!(w);
        if (*w).0.is_p_divisible().divisible {
            ClStatus::Ok
        } else {
            ClStatus::False
        }
    })
}

/// For a set of size `p^2`: `Ok` with the cylinder direction written to
/// `out_dir[0..3]`, or `False`.
///
/// # Safety
/// `w` must be a live handle; `out_dir` must have room for three values.
#[no_mangle]
pub unsafe extern "C" fn cl_weight_is_cylinder(w: *const ClWeight, out_dir: *mut u32) -> ClStatus {
    guard(|| {
        nonnull!(w, out_dir);
        match is_cylinder(&(*w).0) {
            Ok(Some(d)) => {
                ptr::copy_nonoverlapping(d.vector().as_ptr(), out_dir, 3);
                ClStatus::Ok
            }
            Ok(None) => ClStatus::False,
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `w` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_lift_set(w: *const ClWeight, out: *mut *mut ClCertificate) -> ClStatus {
    guard(|| {
        nonnull!(w, out);
        match lift_set(&(*w).0) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(ClCertificate(c)));
                ClStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `w` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_lift_multiset(
    w: *const ClWeight,
    out: *mut *mut ClCertificate,
) -> ClStatus {
    guard(|| {
        nonnull!(w, out);
        match lift_multiset(&(*w).0) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(ClCertificate(c)));
                ClStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `c` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cl_certificate_free(c: *mut ClCertificate) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// `Ok` if the certificate evaluates exactly to its target, `False` otherwise.
///
/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cl_certificate_verify(c: *const ClCertificate) -> ClStatus {
    guard(|| {
        nonnull!(c);
        if verify_certificate(&(*c).0) {
            ClStatus::Ok
        } else {
            ClStatus::False
        }
    })
}

/// # Safety
/// `c` must be a live handle; `out` must be writable. Free the result
/// with [`cl_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cl_certificate_to_json(
    c: *const ClCertificate,
    out: *mut *mut c_char,
) -> ClStatus {
    guard(|| {
        nonnull!(c, out);
        let j = ZCertificateJson::from(&(*c).0);
        emit_string(serde_json::to_string(&j).expect("serializable"), out)
    })
}

/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_certificate_from_json(
    json: *const c_char,
    out: *mut *mut ClCertificate,
) -> ClStatus {
    guard(|| {
        nonnull!(out);
        let s = match read_str(json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let j: ZCertificateJson = match serde_json::from_str(s) {
            Ok(j) => j,
            Err(e) => return fail(ClStatus::Parse, e.to_string()),
        };
        match ZCertificate::try_from(j) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(ClCertificate(c)));
                ClStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `w` must be a live handle; `out` must be writable. Free the result
/// with [`cl_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cl_weight_to_json(w: *const ClWeight, out: *mut *mut c_char) -> ClStatus {
    guard(|| {
        nonnull!(w, out);
        let j = WeightJson::from(&(*w).0);
        emit_string(serde_json::to_string(&j).expect("serializable"), out)
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

//! C ABI for wittforge.
//!
//! Modules are opaque handles. Every call returns a [`WfStatus`]; results come
//! back as JSON strings owned by the caller and released with
//! [`wf_string_free`]. After a failing call, [`wf_last_error_message`] holds a
//! diagnostic for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use serde_json::{json, Value};
use wittforge::acover::{build_cover, cuspidality_certificate, AcoverError, CoverOptions};
use wittforge::enveloping::{verify_key_identity, IdentityMode};
use wittforge::modules::{annihilates, build_preset, check_module_axioms, AnyModule};

/// Outcome of a call. The numeric values match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WfStatus {
    /// The call succeeded and every check passed.
    Ok = 0,
    /// The call succeeded and a check failed; the report says which.
    CheckFailed = 1,
    /// Bad input: null pointer, invalid UTF-8, malformed document, unknown preset.
    InvalidArgument = 2,
    /// The adaptive degree bound hit its ceiling.
    Inconclusive = 3,
    /// An internal error was caught at the boundary.
    Internal = 4,
}

/// A weight module over `Q` or `Q(sqrt(d))`.
pub struct WfModule {
    inner: AnyModule,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Fail(WfStatus, String);

fn invalid(msg: impl ToString) -> Fail {
    Fail(WfStatus::InvalidArgument, msg.to_string())
}

fn guard(f: impl FnOnce() -> Result<WfStatus, Fail>) -> WfStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p.downcast_ref::<&str>().map(|s| s.to_string()).or_else(|| p.downcast_ref::<String>().cloned());
            set_error(msg.unwrap_or_else(|| "panic".into()));
            WfStatus::Internal
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(invalid("null string"));
    }
    CStr::from_ptr(s).to_str().map_err(invalid)
}

unsafe fn module<'a>(m: *const WfModule) -> Result<&'a AnyModule, Fail> {
    m.as_ref().map(|m| &m.inner).ok_or_else(|| invalid("null module"))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(invalid("null output pointer"));
    }
    *out = CString::new(s).map_err(invalid)?.into_raw();
    Ok(())
}

unsafe fn put_module(out: *mut *mut WfModule, inner: AnyModule) -> Result<WfStatus, Fail> {
    if out.is_null() {
        return Err(invalid("null output pointer"));
    }
    *out = Box::into_raw(Box::new(WfModule { inner }));
    Ok(WfStatus::Ok)
}

unsafe fn put_report(out: *mut *mut c_char, report: Value, pass: bool) -> Result<WfStatus, Fail> {
    put_string(out, serde_json::to_string(&report).expect("serializable"))?;
    Ok(if pass { WfStatus::Ok } else { WfStatus::CheckFailed })
}

/// Builds a named preset module.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_module_preset(name: *const c_char, out: *mut *mut WfModule) -> WfStatus {
    guard(|| {
        let m = build_preset(text(name)?).map_err(invalid)?;
        put_module(out, m)
    })
}

/// Parses a module document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_module_from_json(json: *const c_char, out: *mut *mut WfModule) -> WfStatus {
    guard(|| {
        let m = AnyModule::from_json(text(json)?).map_err(invalid)?;
        put_module(out, m)
    })
}

/// Releases a module. Null is ignored.
///
/// # Safety
/// `m` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wf_module_free(m: *mut WfModule) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Serializes a module to its JSON document.
///
/// # Safety
/// `m` must be a live module and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_module_to_json(m: *const WfModule, out: *mut *mut c_char) -> WfStatus {
    guard(|| {
        put_string(out, module(m)?.to_json())?;
        Ok(WfStatus::Ok)
    })
}

/// Checks the module axioms; `radius` bounds the concrete window near exceptions.
///
/// # Safety
/// `m` must be a live module and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_module_check_axioms(m: *const WfModule, radius: i64, out: *mut *mut c_char) -> WfStatus {
    guard(|| {
        let rep = match module(m)? {
            AnyModule::Rational(x) => check_module_axioms(x, radius),
            AnyModule::Quad(x) => check_module_axioms(x, radius),
        };
        let pass = rep.pass;
        put_report(out, json!(rep), pass)
    })
}

/// Does `Ω^{(order)}` with step `h` annihilate the module?
///
/// # Safety
/// `m` must be a live module and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_annihilates(m: *const WfModule, order: u32, h: i64, out: *mut *mut c_char) -> WfStatus {
    guard(|| {
        let cert = match module(m)? {
            AnyModule::Rational(x) => annihilates(x, order, h, 3),
            AnyModule::Quad(x) => annihilates(x, order, h, 3),
        }
        .map_err(invalid)?;
        let pass = cert.annihilates;
        put_report(out, json!(cert), pass)
    })
}

/// Verifies the quadratic differentiator identity symbolically for `(m, r)`.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_verify_identity(m: u32, r: u32, out: *mut *mut c_char) -> WfStatus {
    guard(|| {
        let recs = verify_key_identity(m, r, IdentityMode::Symbolic).map_err(invalid)?;
        let pass = recs.iter().all(|r| r.pass);
        put_report(out, json!(recs), pass)
    })
}

/// Builds the A-cover and certifies uniform rank on weights `-window..=window`.
///
/// # Safety
/// `m` must be a live module and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_cover_certificate(m: *const WfModule, window: i64, out: *mut *mut c_char) -> WfStatus {
    guard(|| {
        let opts = CoverOptions::default();
        let lift = |e: AcoverError| match e {
            AcoverError::Inconclusive { .. } => Fail(WfStatus::Inconclusive, e.to_string()),
            e => invalid(e),
        };
        macro_rules! certify {
            ($x:expr) => {{
                let cover = build_cover($x, &opts).map_err(lift)?;
                let cert = cuspidality_certificate(&cover, -window, window, &opts).map_err(lift)?;
                let report = json!({
                    "rank": cover.rank(),
                    "action": cover.action.table(),
                    "presentation": cover.to_doc(),
                    "cuspidality": cert,
                });
                (report, cert.pass)
            }};
        }
        let (report, pass) = match module(m)? {
            AnyModule::Rational(x) => certify!(x),
            AnyModule::Quad(x) => certify!(x),
        };
        put_report(out, report, pass)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The diagnostic of the last failing call on this thread, or an empty string.
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn wf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

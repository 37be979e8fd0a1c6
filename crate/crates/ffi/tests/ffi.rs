use std::ffi::{c_char, CStr, CString};
use std::ptr;

use serde_json::Value;
use wittforge_ffi::*;

fn take(s: *mut c_char) -> Value {
    assert!(!s.is_null());
    let v = serde_json::from_str(unsafe { CStr::from_ptr(s) }.to_str().unwrap()).unwrap();
    unsafe { wf_string_free(s) };
    v
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(wf_last_error_message()) }.to_string_lossy().into_owned()
}

fn preset(name: &str) -> *mut WfModule {
    let name = CString::new(name).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { wf_module_preset(name.as_ptr(), &mut m) }, WfStatus::Ok);
    m
}

#[test]
fn json_round_trip_through_handles() {
    let m = preset("virasoro_adjoint");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { wf_module_to_json(m, &mut s) }, WfStatus::Ok);
    let doc = unsafe { CStr::from_ptr(s) }.to_owned();
    unsafe { wf_string_free(s) };
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { wf_module_from_json(doc.as_ptr(), &mut back) }, WfStatus::Ok);
    let mut s2 = ptr::null_mut();
    assert_eq!(unsafe { wf_module_to_json(back, &mut s2) }, WfStatus::Ok);
    assert_eq!(unsafe { CStr::from_ptr(s2) }, doc.as_c_str());
    unsafe {
        wf_string_free(s2);
        wf_module_free(back);
        wf_module_free(m);
    }
}

#[test]
fn checks_report_status() {
    let m = preset("virasoro_adjoint");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { wf_module_check_axioms(m, 3, &mut s) }, WfStatus::Ok);
    assert_eq!(take(s)["pass"], true);
    assert_eq!(unsafe { wf_cover_certificate(m, 3, &mut s) }, WfStatus::Ok);
    assert_eq!(take(s)["rank"], 3);
    unsafe { wf_module_free(m) };

    let ff = preset("feigin_fuks_length2");
    assert_eq!(unsafe { wf_annihilates(ff, 9, 1, &mut s) }, WfStatus::Ok);
    take(s);
    assert_eq!(unsafe { wf_annihilates(ff, 8, 1, &mut s) }, WfStatus::CheckFailed);
    assert!(take(s)["witness"].is_object());
    unsafe { wf_module_free(ff) };

    assert_eq!(unsafe { wf_verify_identity(2, 3, &mut s) }, WfStatus::Ok);
    assert_eq!(take(s)[0]["residue_term_count"], 0);
}

#[test]
fn errors_set_the_message() {
    let mut m = ptr::null_mut();
    let bad = CString::new("{\"algebra\": \"W1\"}").unwrap();
    assert_eq!(unsafe { wf_module_from_json(bad.as_ptr(), &mut m) }, WfStatus::InvalidArgument);
    assert!(m.is_null());
    assert!(!last_error().is_empty());
    let name = CString::new("nope").unwrap();
    assert_eq!(unsafe { wf_module_preset(name.as_ptr(), &mut m) }, WfStatus::InvalidArgument);
    assert!(last_error().contains("nope"));
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { wf_module_to_json(ptr::null(), &mut s) }, WfStatus::InvalidArgument);
    assert_eq!(unsafe { wf_verify_identity(1, 2, &mut s) }, WfStatus::InvalidArgument);
    assert_eq!(unsafe { wf_verify_identity(2, 2, ptr::null_mut()) }, WfStatus::InvalidArgument);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { wf_verify_identity(2, 2, &mut s) }, WfStatus::Ok);
    assert!(last_error().is_empty());
    take(s);
    unsafe {
        wf_module_free(ptr::null_mut());
        wf_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/wittforge.h");
    let h = std::fs::read_to_string(&path).unwrap();
    for name in [
        "typedef struct WfModule WfModule",
        "WF_STATUS_OK = 0",
        "WF_STATUS_INCONCLUSIVE = 3",
        "wf_module_preset",
        "wf_module_from_json",
        "wf_module_free",
        "wf_module_to_json",
        "wf_module_check_axioms",
        "wf_annihilates",
        "wf_verify_identity",
        "wf_cover_certificate",
        "wf_string_free",
        "wf_last_error_message",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
    // The header must be valid C when a compiler is around.
    if let Ok(out) = std::process::Command::new("cc").args(["-fsyntax-only", "-std=c99", "-x", "c"]).arg(&path).output() {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}

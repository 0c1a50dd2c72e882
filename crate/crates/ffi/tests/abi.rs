use std::ffi::{CStr, CString};
use std::ptr;

use jpmono_ffi::*;

unsafe fn take(s: *mut std::ffi::c_char) -> serde_json::Value {
    let v = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
    jpm_string_free(s);
    v
}

#[test]
fn instance_roundtrip() {
    unsafe {
        let w = [1u64, 1, 1, 1, 1, 1];
        let mut h = ptr::null_mut();
        assert_eq!(jpm_instance_new(6, w.as_ptr(), w.len(), 7, 0, 0, &mut h), JpmStatus::Ok);
        assert_eq!(jpm_instance_dimension(h), 4);
        let mut out = ptr::null_mut();
        assert_eq!(jpm_instance_verify(h, 0, &mut out), JpmStatus::Ok);
        assert_eq!(take(out)["ok"], true);
        assert_eq!(jpm_instance_classify(h, 0, &mut out), JpmStatus::Ok);
        assert_eq!(take(out)["name"], "ST32");
        jpm_instance_free(h);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let w = [1u64, 1];
        let mut h = ptr::null_mut();
        assert_eq!(jpm_instance_new(3, w.as_ptr(), w.len(), 7, 0, 0, &mut h), JpmStatus::Domain);
        assert!(h.is_null());
        assert!(!CStr::from_ptr(jpm_last_error()).to_bytes().is_empty());
        assert_eq!(jpm_instance_new(3, ptr::null(), 0, 7, 0, 0, &mut h), JpmStatus::NullArgument);
        let mut out = ptr::null_mut();
        assert_eq!(jpm_instance_verify(ptr::null(), 0, &mut out), JpmStatus::NullArgument);
        jpm_instance_free(ptr::null_mut());
        jpm_string_free(ptr::null_mut());
    }
}

#[test]
fn run_matches_cli() {
    let args: Vec<CString> = ["selmer", "avg", "--l", "7", "--n", "3", "--q-mod-3", "1"]
        .iter()
        .map(|s| CString::new(*s).unwrap())
        .collect();
    let ptrs: Vec<_> = args.iter().map(|s| s.as_ptr()).collect();
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(jpm_run(ptrs.len(), ptrs.as_ptr(), &mut out), JpmStatus::Ok);
        assert_eq!(take(out)["anchor"], "prymstats::expected_selmer");
        let bad = [CString::new("bogus").unwrap()];
        let bp = [bad[0].as_ptr()];
        assert_eq!(jpm_run(1, bp.as_ptr(), &mut out), JpmStatus::Usage);
        jpm_string_free(out);
    }
}

//! C ABI over the jpmono library.
//!
//! Results come back as NUL-terminated JSON strings owned by the library;
//! release them with `jpm_string_free`. Failures return a nonzero
//! `JpmStatus`, and `jpm_last_error` holds the message for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use jpmono::cli::{classify_report, instance, verify_report, ParamArgs};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JpmStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Usage = 3,
    Domain = 4,
    Panic = 5,
}

/// Opaque handle: a validated parameter tuple reduced at one prime.
pub struct JpmInstance {
    args: ParamArgs,
    dimension: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn guard(f: impl FnOnce() -> Result<(), (JpmStatus, String)>) -> JpmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            JpmStatus::Ok
        }
        Ok(Err((st, msg))) => {
            set_error(msg);
            st
        }
        Err(_) => {
            set_error("internal panic");
            JpmStatus::Panic
        }
    }
}

fn domain(e: jpmono::error::Error) -> (JpmStatus, String) {
    (JpmStatus::Domain, e.to_string())
}

fn null() -> (JpmStatus, String) {
    (JpmStatus::NullArgument, "null argument".into())
}

unsafe fn write_json(out: *mut *mut c_char, v: &serde_json::Value) {
    *out = CString::new(v.to_string()).unwrap_or_default().into_raw();
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn jpm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds the tuple for exponents `weights[0..len]` of a primitive N-th root,
/// reduced at the chosen prime above `prime` and embedding.
///
/// # Safety
/// `weights` must point to `len` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jpm_instance_new(
    n_order: u64,
    weights: *const u64,
    len: usize,
    prime: u64,
    prime_index: usize,
    embedding: usize,
    out: *mut *mut JpmInstance,
) -> JpmStatus {
    guard(|| {
        if weights.is_null() || out.is_null() {
            return Err(null());
        }
        let args = ParamArgs {
            n_order,
            weights: std::slice::from_raw_parts(weights, len).to_vec(),
            prime,
            prime_index,
            embedding,
        };
        let inst = instance(&args).map_err(domain)?;
        let dimension = inst.tuple.gens.first().map_or(0, |g| g.rows);
        *out = Box::into_raw(Box::new(JpmInstance { args, dimension }));
        Ok(())
    })
}

/// Matrix size of the tuple; 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn jpm_instance_dimension(h: *const JpmInstance) -> usize {
    h.as_ref().map_or(0, |h| h.dimension)
}

/// Runs the defining-relation and rigidity checks; writes a JSON report.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn jpm_instance_verify(h: *const JpmInstance, seed: u64, out: *mut *mut c_char) -> JpmStatus {
    guard(|| {
        let (Some(h), false) = (h.as_ref(), out.is_null()) else { return Err(null()) };
        write_json(out, &verify_report(&h.args, seed).map_err(domain)?);
        Ok(())
    })
}

/// Classifies the monodromy image; writes a JSON report.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn jpm_instance_classify(h: *const JpmInstance, seed: u64, out: *mut *mut c_char) -> JpmStatus {
    guard(|| {
        let (Some(h), false) = (h.as_ref(), out.is_null()) else { return Err(null()) };
        write_json(out, &classify_report(&h.args, seed).map_err(domain)?);
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from `jpm_instance_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn jpm_instance_free(h: *mut JpmInstance) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Runs a command-line invocation (`argv` excludes the program name) and
/// writes whatever it printed to stdout. Domain errors still produce the JSON
/// error report in `out`.
///
/// # Safety
/// `argv` must hold `argc` valid C strings and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jpm_run(argc: usize, argv: *const *const c_char, out: *mut *mut c_char) -> JpmStatus {
    guard(|| {
        if out.is_null() || (argv.is_null() && argc > 0) {
            return Err(null());
        }
        let mut args = vec!["jpmono".to_string()];
        for i in 0..argc {
            let p = *argv.add(i);
            if p.is_null() {
                return Err(null());
            }
            let s = CStr::from_ptr(p).to_str().map_err(|e| (JpmStatus::InvalidUtf8, e.to_string()))?;
            args.push(s.to_string());
        }
        let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
        let code = jpmono::cli::run(args, &mut stdout, &mut stderr);
        let text = String::from_utf8_lossy(&stdout).into_owned();
        *out = CString::new(text).unwrap_or_default().into_raw();
        match code {
            0 => Ok(()),
            1 => Err((JpmStatus::Domain, String::from_utf8_lossy(&stdout).trim().to_string())),
            _ => Err((JpmStatus::Usage, String::from_utf8_lossy(&stderr).trim().to_string())),
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn jpm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

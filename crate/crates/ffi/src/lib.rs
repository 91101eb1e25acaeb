//! C interface to the conjugacy solvers.
//!
//! Groups live behind the opaque `ConjlenGroup` handle. Every call returns a
//! `ConjlenStatus`; on failure a message is available from
//! `conjlen_last_error` until the next call on the same thread. Strings
//! handed out by the library must be released with `conjlen_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use conjlen::groups::GroupConfig;
use conjlen::metrics::{bfs_ball, DEFAULT_CAP};
use conjlen::solvers::{self, SolverCaps};
use conjlen::Error;

/// Status codes; the numeric values match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConjlenStatus {
    Ok = 0,
    NotConjugate = 1,
    InvalidInput = 2,
    SearchExhausted = 3,
    CapExceeded = 4,
    NullPointer = 5,
    Internal = 6,
}

/// A validated group configuration.
pub struct ConjlenGroup {
    cfg: GroupConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> ConjlenStatus {
    match err {
        Error::CapExceeded { .. } => ConjlenStatus::CapExceeded,
        Error::SearchExhausted | Error::BeyondRadius { .. } => ConjlenStatus::SearchExhausted,
        _ => ConjlenStatus::InvalidInput,
    }
}

/// Runs `f`, recording errors and turning panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<ConjlenStatus, (ConjlenStatus, String)>) -> ConjlenStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            ConjlenStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (ConjlenStatus, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (ConjlenStatus, String) {
    (ConjlenStatus::NullPointer, "null pointer argument".into())
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, (ConjlenStatus, String)> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|_| (ConjlenStatus::InvalidInput, "string is not valid UTF-8".into()))
}

/// # Safety
/// `out` must be null or valid for a pointer write.
unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (ConjlenStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    let c = CString::new(s).map_err(|_| (ConjlenStatus::Internal, "interior NUL in output".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Parses a JSON group configuration and stores a new handle in `*out`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn conjlen_group_from_json(json: *const c_char, out: *mut *mut ConjlenGroup) -> ConjlenStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let text = read_str(json)?;
        let cfg = GroupConfig::from_json_str(text).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(ConjlenGroup { cfg }));
        Ok(ConjlenStatus::Ok)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `group` must come from `conjlen_group_from_json` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn conjlen_group_free(group: *mut ConjlenGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// Canonical form of a word, e.g. `(0,(2),0)`.
///
/// # Safety
/// `group` must be a live handle, `word` a NUL-terminated string and `out`
/// valid for writing.
#[no_mangle]
pub unsafe extern "C" fn conjlen_normal_form(group: *const ConjlenGroup, word: *const c_char, out: *mut *mut c_char) -> ConjlenStatus {
    guard(|| {
        let g = group.as_ref().ok_or_else(null)?;
        let w = read_str(word)?;
        let element = g.cfg.eval_str(w).map_err(lib_err)?;
        write_string(out, element.to_string())?;
        Ok(ConjlenStatus::Ok)
    })
}

/// Decides conjugacy of two words. Writes a JSON report to `*report` and
/// returns `Ok`, `NotConjugate` or `SearchExhausted`. When conjugate, the
/// witness is shortened within a ball of radius `radius`.
///
/// # Safety
/// `group` must be a live handle, `u` and `v` NUL-terminated strings and
/// `report` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn conjlen_conjugate(
    group: *const ConjlenGroup,
    u: *const c_char,
    v: *const c_char,
    radius: usize,
    report: *mut *mut c_char,
) -> ConjlenStatus {
    guard(|| {
        let g = group.as_ref().ok_or_else(null)?;
        let cfg = &g.cfg;
        let ue = cfg.eval_str(read_str(u)?).map_err(lib_err)?;
        let ve = cfg.eval_str(read_str(v)?).map_err(lib_err)?;
        let mut r = solvers::conjugate(cfg, &ue, &ve, &SolverCaps::default()).map_err(lib_err)?;
        let ball = if r.conjugate { Some(bfs_ball(cfg, radius, DEFAULT_CAP).map_err(lib_err)?) } else { None };
        if let Some(b) = &ball {
            r.minimize_in(cfg, &ue, &ve, b);
        }
        let json = serde_json::to_string(&r.to_json(cfg, ball.as_ref())).map_err(|e| (ConjlenStatus::Internal, e.to_string()))?;
        write_string(report, json)?;
        Ok(if r.conjugate {
            ConjlenStatus::Ok
        } else if r.search_exhausted {
            ConjlenStatus::SearchExhausted
        } else {
            ConjlenStatus::NotConjugate
        })
    })
}

/// Exact word length, read from a ball of radius `radius`.
///
/// # Safety
/// `group` must be a live handle, `word` a NUL-terminated string and `out`
/// valid for writing.
#[no_mangle]
pub unsafe extern "C" fn conjlen_word_length(group: *const ConjlenGroup, word: *const c_char, radius: usize, out: *mut usize) -> ConjlenStatus {
    guard(|| {
        let g = group.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let element = g.cfg.eval_str(read_str(word)?).map_err(lib_err)?;
        let ball = bfs_ball(&g.cfg, radius, DEFAULT_CAP).map_err(lib_err)?;
        *out = ball.word_length(&element).map_err(lib_err)?;
        Ok(ConjlenStatus::Ok)
    })
}

/// Message describing the last failure on this thread, or an empty string.
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn conjlen_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn conjlen_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn conjlen_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

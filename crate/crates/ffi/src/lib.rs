//! C interface to `cuspenv`.
//!
//! Objects cross the boundary as opaque pointers created by a `*_parse` or
//! `cuspenv_run` call and released by the matching `*_free`. Every fallible
//! function returns a [`CuspenvStatus`]; on failure a message is available
//! from [`cuspenv_last_error`] on the same thread. Strings handed out by the
//! library are NUL-terminated UTF-8 and must be released with
//! [`cuspenv_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cuspenv::cli::{parse_germ, GermExpression};
use cuspenv::envelope::envelope_of;
use cuspenv::jetcalc::PlaneGermJet;
use cuspenv::orbitspace::{du_plessis_determinacy, extended_codimension};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CuspenvStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    /// The input parsed but is not a plain germ (a CTF record, say).
    WrongKind = 4,
    Computation = 5,
    /// A Rust panic was caught at the boundary.
    Internal = 6,
}

/// A parsed germ, family or CTF record.
pub struct CuspenvGerm {
    inner: GermExpression,
}

/// Captured output of a command-line invocation.
pub struct CuspenvOutput {
    stdout: CString,
    stderr: CString,
    code: i32,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CuspenvDeterminacy {
    pub certified: bool,
    /// Certified determinacy order `k + l`.
    pub order: u32,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CuspenvCodim {
    pub codim: u32,
    /// False when `codim` is only a lower bound.
    pub conclusive: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(CuspenvStatus, String);

impl Failure {
    fn new(status: CuspenvStatus, msg: impl ToString) -> Self {
        Failure(status, msg.to_string())
    }
}

/// Runs `body`, records any error message and converts panics.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CuspenvStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CuspenvStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {msg}"));
            CuspenvStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(CuspenvStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(CuspenvStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

unsafe fn germ_ref<'a>(g: *const CuspenvGerm) -> Result<&'a CuspenvGerm, Failure> {
    g.as_ref().ok_or_else(|| Failure::new(CuspenvStatus::NullArgument, "null germ handle"))
}

fn plane_germ(g: &CuspenvGerm) -> Result<PlaneGermJet, Failure> {
    g.inner
        .as_germ()
        .ok_or_else(|| Failure::new(CuspenvStatus::WrongKind, format!("expected a germ, got {}", g.inner.kind())))
}

fn out_string(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure::new(CuspenvStatus::Internal, e))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

macro_rules! require {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return Err(Failure::new(CuspenvStatus::NullArgument, concat!("null argument `", stringify!($p), "`")));
        })+
    };
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cuspenv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// is valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn cuspenv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Parses germ, family or CTF syntax at working order `order`.
///
/// # Safety
/// `source` must be a valid NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cuspenv_germ_parse(source: *const c_char, order: u32, out: *mut *mut CuspenvGerm) -> CuspenvStatus {
    guard(|| {
        require!(out);
        *out = ptr::null_mut();
        let src = text(source)?;
        if order == 0 {
            return Err(Failure::new(CuspenvStatus::Parse, "working order must be at least 1"));
        }
        let inner = parse_germ(src, order).map_err(|e| Failure::new(CuspenvStatus::Parse, e.render(src)))?;
        *out = Box::into_raw(Box::new(CuspenvGerm { inner }));
        Ok(())
    })
}

/// # Safety
/// `germ` must be NULL or a handle from [`cuspenv_germ_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cuspenv_germ_free(germ: *mut CuspenvGerm) {
    if !germ.is_null() {
        drop(Box::from_raw(germ));
    }
}

/// Canonical re-printing of the parsed input.
///
/// # Safety
/// `germ` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cuspenv_germ_canonical(germ: *const CuspenvGerm, out: *mut *mut c_char) -> CuspenvStatus {
    guard(|| {
        require!(out);
        out_string(germ_ref(germ)?.inner.canonical(), out)
    })
}

/// Determinacy certificate with filtration indices `k` and `l`. When
/// `determinant` is not NULL it receives the determinant of the second rank
/// test as a string (empty if there is none).
///
/// # Safety
/// `germ` must be a live handle; `out` writable; `determinant` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn cuspenv_germ_determinacy(
    germ: *const CuspenvGerm,
    k: u32,
    l: u32,
    out: *mut CuspenvDeterminacy,
    determinant: *mut *mut c_char,
) -> CuspenvStatus {
    guard(|| {
        require!(out);
        let f = plane_germ(germ_ref(germ)?)?;
        let cert = du_plessis_determinacy(&f, k, l).map_err(|e| Failure::new(CuspenvStatus::Computation, e))?;
        *out = CuspenvDeterminacy { certified: cert.certified, order: cert.order };
        if !determinant.is_null() {
            let det = cert.inclusion_5.determinant.map(|d| d.to_string()).unwrap_or_default();
            out_string(det, determinant)?;
        }
        Ok(())
    })
}

/// Extended codimension with tangent spaces truncated at degree `cap`.
///
/// # Safety
/// `germ` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cuspenv_germ_codim(germ: *const CuspenvGerm, cap: u32, out: *mut CuspenvCodim) -> CuspenvStatus {
    guard(|| {
        require!(out);
        let f = plane_germ(germ_ref(germ)?)?;
        let r = extended_codimension(&f, cap).map_err(|e| Failure::new(CuspenvStatus::Computation, e))?;
        let codim = u32::try_from(r.codim).map_err(|e| Failure::new(CuspenvStatus::Computation, e))?;
        *out = CuspenvCodim { codim, conclusive: r.conclusive };
        Ok(())
    })
}

/// Envelope branch tags, comma separated (e.g. `semicubic-cusp,regular`).
///
/// # Safety
/// `germ` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cuspenv_germ_envelope_tags(germ: *const CuspenvGerm, out: *mut *mut c_char) -> CuspenvStatus {
    guard(|| {
        require!(out);
        let f = plane_germ(germ_ref(germ)?)?;
        let env = envelope_of(&f).map_err(|e| Failure::new(CuspenvStatus::Computation, e))?;
        let tags: Vec<String> = env.tags().iter().map(|t| t.to_string()).collect();
        out_string(tags.join(","), out)
    })
}

/// Runs the command-line tool in process. `argv` excludes the program name.
/// A non-zero exit status of the command is not a failure of this call.
///
/// # Safety
/// `argv` must point to `argc` valid strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cuspenv_run(argc: usize, argv: *const *const c_char, out: *mut *mut CuspenvOutput) -> CuspenvStatus {
    guard(|| {
        require!(out);
        *out = ptr::null_mut();
        if argc > 0 && argv.is_null() {
            return Err(Failure::new(CuspenvStatus::NullArgument, "null argv"));
        }
        let mut args = vec!["cuspenv".to_string()];
        for i in 0..argc {
            args.push(text(*argv.add(i))?.to_string());
        }
        let inv = cuspenv::cli::run(args);
        let c = |s: String| CString::new(s).map_err(|e| Failure::new(CuspenvStatus::Internal, e));
        let output = CuspenvOutput { stdout: c(inv.stdout)?, stderr: c(inv.stderr)?, code: inv.code };
        *out = Box::into_raw(Box::new(output));
        Ok(())
    })
}

/// Standard output of the run; owned by `output`.
///
/// # Safety
/// `output` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cuspenv_output_stdout(output: *const CuspenvOutput) -> *const c_char {
    output.as_ref().map_or(ptr::null(), |o| o.stdout.as_ptr())
}

/// Standard error of the run; owned by `output`.
///
/// # Safety
/// `output` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cuspenv_output_stderr(output: *const CuspenvOutput) -> *const c_char {
    output.as_ref().map_or(ptr::null(), |o| o.stderr.as_ptr())
}

/// Exit status: 0 positive, 2 negative verdict, 1 error; -1 for NULL.
///
/// # Safety
/// `output` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cuspenv_output_code(output: *const CuspenvOutput) -> i32 {
    output.as_ref().map_or(-1, |o| o.code)
}

/// # Safety
/// `output` must be NULL or a handle from [`cuspenv_run`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cuspenv_output_free(output: *mut CuspenvOutput) {
    if !output.is_null() {
        drop(Box::from_raw(output));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cuspenv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

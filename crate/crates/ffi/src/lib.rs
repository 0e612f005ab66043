//! C ABI for `fgalg`.
//!
//! Objects cross the boundary as opaque handles created by `*_new` and
//! released by the matching `*_free`. Every fallible function returns an
//! [`FgalgStatus`]; on failure the message is available from
//! [`fgalg_last_error`] on the same thread. Strings handed out by the
//! library are released with [`fgalg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use fgalg::chern::{verify_exterior_recursion, verify_gamma_congruence};
use fgalg::cli::LawSpec;
use fgalg::exponent::{flag_diagnostics, tau, ScalarRing, TauOptions};
use fgalg::fgl::FormalGroupLaw;
use fgalg::rootsys::RootSystem;
use fgalg::series::CoeffRing;
use fgalg::Error;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FgalgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Structural = 5,
    Precondition = 6,
    SpanMismatch = 7,
    Panic = 8,
}

/// A root system.
pub struct FgalgRootSystem {
    inner: Arc<RootSystem>,
}

/// A truncated formal group law.
pub struct FgalgLaw {
    inner: FormalGroupLaw,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> FgalgStatus {
    match e {
        Error::Structural(_) => FgalgStatus::Structural,
        Error::Domain(_) => FgalgStatus::Domain,
        Error::Precondition(_) => FgalgStatus::Precondition,
        Error::SpanMismatch { .. } => FgalgStatus::SpanMismatch,
        Error::Parse(_) => FgalgStatus::Parse,
    }
}

struct Failure(FgalgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FgalgStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FgalgStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            FgalgStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(FgalgStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(FgalgStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("interior nul removed")
        .into_raw()
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string(value).map_err(|e| Failure(FgalgStatus::Parse, e.to_string()))
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn fgalg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fgalg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the root system with the given label, e.g. `"B3"`.
///
/// # Safety
/// `label` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fgalg_root_system_new(
    label: *const c_char,
    out: *mut *mut FgalgRootSystem,
) -> FgalgStatus {
    guard(|| {
        let label = read_str(label, "label")?;
        let rs = RootSystem::from_label(label)?;
        let handle = Box::into_raw(Box::new(FgalgRootSystem {
            inner: Arc::new(rs),
        }));
        write_out(out, handle, "out").inspect_err(|_| drop(Box::from_raw(handle)))
    })
}

/// # Safety
/// `rs` must come from [`fgalg_root_system_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fgalg_root_system_free(rs: *mut FgalgRootSystem) {
    if !rs.is_null() {
        drop(Box::from_raw(rs));
    }
}

/// Rank and Weyl group order.
///
/// # Safety
/// `rs` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn fgalg_root_system_info(
    rs: *const FgalgRootSystem,
    rank: *mut u32,
    weyl_order: *mut u64,
) -> FgalgStatus {
    guard(|| {
        let rs = rs.as_ref().ok_or_else(|| null("root system"))?;
        write_out(rank, rs.inner.rank() as u32, "rank")?;
        write_out(weyl_order, rs.inner.weyl_order(), "weyl_order")
    })
}

/// Builds a law from a spec such as `"multiplicative"`, `"symbolic"` or
/// `"elliptic:1,1,1,1,1"` over `ring` (`"Z"`, `"Q"`, `"Z/<m>"`), truncated
/// at total degree `trunc`.
///
/// # Safety
/// The strings must be nul-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fgalg_law_new(
    spec: *const c_char,
    ring: *const c_char,
    trunc: u32,
    out: *mut *mut FgalgLaw,
) -> FgalgStatus {
    guard(|| {
        let spec = LawSpec::parse(read_str(spec, "spec")?)?;
        let ring = CoeffRing::parse(read_str(ring, "ring")?)?;
        let law = spec.build(&ring, trunc)?;
        let handle = Box::into_raw(Box::new(FgalgLaw { inner: law }));
        write_out(out, handle, "out").inspect_err(|_| drop(Box::from_raw(handle)))
    })
}

/// # Safety
/// `law` must come from [`fgalg_law_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fgalg_law_free(law: *mut FgalgLaw) {
    if !law.is_null() {
        drop(Box::from_raw(law));
    }
}

/// The law as text in `u`, `v`; free with [`fgalg_string_free`].
///
/// # Safety
/// `law` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fgalg_law_display(
    law: *const FgalgLaw,
    out: *mut *mut c_char,
) -> FgalgStatus {
    guard(|| {
        let law = law.as_ref().ok_or_else(|| null("law"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(to_c_string(law.inner.display()));
        Ok(())
    })
}

/// Writes whether unit, commutativity and associativity all hold.
///
/// # Safety
/// `law` must be a live handle and `pass` writable.
#[no_mangle]
pub unsafe extern "C" fn fgalg_law_verify_axioms(
    law: *const FgalgLaw,
    pass: *mut bool,
) -> FgalgStatus {
    guard(|| {
        let law = law.as_ref().ok_or_else(|| null("law"))?;
        write_out(pass, law.inner.verify_axioms().all_pass(), "pass")
    })
}

/// The exponent `τ_d` from `from` to `to` with default generator pools.
/// `json_out` may be null; otherwise it receives the full report.
///
/// # Safety
/// Handles must be live; `tau_out` writable; `json_out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn fgalg_tau(
    rs: *const FgalgRootSystem,
    from: *const FgalgLaw,
    to: *const FgalgLaw,
    d: u32,
    tau_out: *mut u64,
    json_out: *mut *mut c_char,
) -> FgalgStatus {
    guard(|| {
        let rs = rs.as_ref().ok_or_else(|| null("root system"))?;
        let from = from.as_ref().ok_or_else(|| null("from"))?;
        let to = to.as_ref().ok_or_else(|| null("to"))?;
        if tau_out.is_null() {
            return Err(null("tau_out"));
        }
        let report = tau(&rs.inner, &from.inner, &to.inner, d, &TauOptions::default())?;
        let text = if json_out.is_null() {
            None
        } else {
            Some(json(&report)?)
        };
        tau_out.write(report.tau);
        if let Some(t) = text {
            json_out.write(to_c_string(t));
        }
        Ok(())
    })
}

/// Flag-model diagnostics in degree `d` over `ring` (`"Z"`, `"Q"`,
/// `"Z[1/p,...]"`) as a JSON object.
///
/// # Safety
/// Handles must be live, `ring` nul-terminated and `json_out` writable.
#[no_mangle]
pub unsafe extern "C" fn fgalg_flag_json(
    rs: *const FgalgRootSystem,
    law: *const FgalgLaw,
    d: u32,
    ring: *const c_char,
    json_out: *mut *mut c_char,
) -> FgalgStatus {
    guard(|| {
        let rs = rs.as_ref().ok_or_else(|| null("root system"))?;
        let law = law.as_ref().ok_or_else(|| null("law"))?;
        let ring: ScalarRing = read_str(ring, "ring")?.parse()?;
        if json_out.is_null() {
            return Err(null("json_out"));
        }
        let report = flag_diagnostics(&rs.inner, &law.inner, d, &ring, None)?;
        json_out.write(to_c_string(json(&report)?));
        Ok(())
    })
}

/// Which characteristic-class identity to check.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FgalgClassCheck {
    Gamma = 0,
    ExteriorRecursion = 1,
}

/// Runs a characteristic-class identity check for rank `r` with classes up
/// to `class_degree`; the law must be known to at least that degree.
///
/// # Safety
/// `law` must be a live handle and `pass` writable.
#[no_mangle]
pub unsafe extern "C" fn fgalg_chern_check(
    law: *const FgalgLaw,
    check: FgalgClassCheck,
    r: u32,
    class_degree: u32,
    pass: *mut bool,
) -> FgalgStatus {
    guard(|| {
        let law = law.as_ref().ok_or_else(|| null("law"))?;
        let report = match check {
            FgalgClassCheck::Gamma => {
                verify_gamma_congruence(&law.inner, r as usize, class_degree)?
            }
            FgalgClassCheck::ExteriorRecursion => {
                verify_exterior_recursion(&law.inner, r as usize, class_degree)?
            }
        };
        write_out(pass, report.pass, "pass")
    })
}

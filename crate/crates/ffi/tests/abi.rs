use std::ffi::{CStr, CString};
use std::ptr;

use fgalg_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = fgalg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

unsafe fn law(spec: &str, trunc: u32) -> *mut FgalgLaw {
    let mut out = ptr::null_mut();
    assert_eq!(
        fgalg_law_new(c(spec).as_ptr(), c("Z").as_ptr(), trunc, &mut out),
        FgalgStatus::Ok
    );
    out
}

unsafe fn root_system(label: &str) -> *mut FgalgRootSystem {
    let mut out = ptr::null_mut();
    assert_eq!(
        fgalg_root_system_new(c(label).as_ptr(), &mut out),
        FgalgStatus::Ok
    );
    out
}

#[test]
fn root_system_handles() {
    unsafe {
        let rs = root_system("G2");
        let (mut rank, mut order) = (0u32, 0u64);
        assert_eq!(
            fgalg_root_system_info(rs, &mut rank, &mut order),
            FgalgStatus::Ok
        );
        assert_eq!((rank, order), (2, 12));
        fgalg_root_system_free(rs);
        fgalg_root_system_free(ptr::null_mut());
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(
            fgalg_root_system_new(c("Q7").as_ptr(), &mut out),
            FgalgStatus::Parse
        );
        assert!(out.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(
            fgalg_root_system_new(ptr::null(), &mut out),
            FgalgStatus::NullPointer
        );
        assert!(last_error().contains("null"));
        let bad = [0xffu8, 0];
        assert_eq!(
            fgalg_root_system_new(bad.as_ptr().cast(), &mut out),
            FgalgStatus::InvalidUtf8
        );
        let mut l = ptr::null_mut();
        assert_eq!(
            fgalg_law_new(c("nope").as_ptr(), c("Z").as_ptr(), 4, &mut l),
            FgalgStatus::Parse
        );
        let rs = root_system("A2");
        assert!(fgalg_last_error().is_null());
        let (m, a) = (law("multiplicative", 4), law("additive", 4));
        let mut t = 0u64;
        assert_eq!(
            fgalg_tau(rs, m, a, 0, &mut t, ptr::null_mut()),
            FgalgStatus::Precondition
        );
        fgalg_law_free(m);
        fgalg_law_free(a);
        fgalg_root_system_free(rs);
    }
}

#[test]
fn laws_and_exponents() {
    unsafe {
        let m = law("multiplicative", 4);
        let a = law("additive", 4);
        let mut text = ptr::null_mut();
        assert_eq!(fgalg_law_display(m, &mut text), FgalgStatus::Ok);
        assert_eq!(CStr::from_ptr(text).to_str().unwrap(), "u + v - u*v");
        fgalg_string_free(text);
        let mut pass = false;
        assert_eq!(fgalg_law_verify_axioms(m, &mut pass), FgalgStatus::Ok);
        assert!(pass);

        let rs = root_system("B3");
        let mut t = 0u64;
        let mut json = ptr::null_mut();
        assert_eq!(fgalg_tau(rs, m, a, 2, &mut t, &mut json), FgalgStatus::Ok);
        assert_eq!(t, 2);
        let report: serde_json::Value =
            serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        assert_eq!(report["tau"], 2);
        assert_eq!(report["type"], "B3");
        fgalg_string_free(json);

        let mut json = ptr::null_mut();
        assert_eq!(
            fgalg_flag_json(rs, a, 2, c("Z[1/2]").as_ptr(), &mut json),
            FgalgStatus::Ok
        );
        let report: serde_json::Value =
            serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        assert_eq!(report["rank"], 5);
        fgalg_string_free(json);

        fgalg_root_system_free(rs);
        fgalg_law_free(m);
        fgalg_law_free(a);
    }
}

#[test]
fn class_checks() {
    unsafe {
        let s = law("symbolic", 3);
        let mut pass = false;
        assert_eq!(
            fgalg_chern_check(s, FgalgClassCheck::Gamma, 2, 3, &mut pass),
            FgalgStatus::Ok
        );
        assert!(pass);
        assert_eq!(
            fgalg_chern_check(s, FgalgClassCheck::ExteriorRecursion, 2, 3, &mut pass),
            FgalgStatus::Ok
        );
        assert!(pass);
        assert_eq!(
            fgalg_chern_check(s, FgalgClassCheck::Gamma, 2, 5, &mut pass),
            FgalgStatus::Structural
        );
        fgalg_law_free(s);
    }
}

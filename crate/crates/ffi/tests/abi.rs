// SPDX-License-Identifier: Apache-2.0

use std::ffi::{CStr, CString};
use std::ptr;

use effcone_ffi::*;

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    effcone_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(effcone_last_error()).to_str().unwrap().to_owned()
}

#[test]
fn certificate_lifecycle() {
    unsafe {
        let mut cert = ptr::null_mut();
        assert_eq!(effcone_injectivity_certify(3, 2, EffconeSource::Displayed, &mut cert), EffconeStatus::Ok);
        assert_eq!(effcone_certificate_kernel_dim(cert), 0);
        assert_eq!(effcone_certificate_check(cert), EffconeStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(effcone_certificate_to_json(cert, &mut json), EffconeStatus::Ok);
        assert!(take(json).contains("\"kernel_dim\": 0"));
        effcone_certificate_free(cert);
        effcone_certificate_free(ptr::null_mut());
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut cert = ptr::null_mut();
        assert_eq!(effcone_injectivity_certify(2, 1, EffconeSource::Table, &mut cert), EffconeStatus::InvalidArgument);
        assert!(cert.is_null());
        assert!(last_error().contains("g=2"));
        assert_eq!(effcone_injectivity_certify(3, 2, EffconeSource::Displayed, ptr::null_mut()), EffconeStatus::NullPointer);
        assert_eq!(effcone_certificate_kernel_dim(ptr::null()), usize::MAX);
        let mut out = 0u64;
        assert_eq!(effcone_strata_count(5, 1, -1, 0, ptr::null(), &mut out), EffconeStatus::NullPointer);
        let bad = [0xffu8, 0];
        assert_eq!(effcone_strata_count(5, 1, -1, 0, bad.as_ptr().cast(), &mut out), EffconeStatus::InvalidUtf8);
    }
}

#[test]
fn theta_and_strata() {
    unsafe {
        let mut s = ptr::null_mut();
        let m = [2i64, 3, -1];
        assert_eq!(effcone_theta_degree(3, m.as_ptr(), 3, &mut s), EffconeStatus::Ok);
        assert_eq!(take(s), "216");
        assert_eq!(effcone_theta_degree(2, m.as_ptr(), 3, &mut s), EffconeStatus::InvalidArgument);
        let sig = CString::new("[[2,-2]]").unwrap();
        let mut n = 0u64;
        assert_eq!(effcone_strata_count(5, 1, -1, 0, sig.as_ptr(), &mut n), EffconeStatus::Ok);
        assert_eq!(n, 24);
    }
}

#[test]
fn fiber_and_twist() {
    unsafe {
        let f = CString::new("x^5+1").unwrap();
        let mut s = ptr::null_mut();
        let status = effcone_fiber_report(7, 1, f.as_ptr(), 2, -1, 3, 4, 0, &mut s);
        assert!(matches!(status, EffconeStatus::Ok | EffconeStatus::CheckFailed));
        let report: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert!(report["observed_max"].as_u64().unwrap() <= 8);

        let good = CString::new(r#"{"vertices":[{"genus":2,"markings":[2]}]}"#).unwrap();
        assert_eq!(effcone_twist_check(good.as_ptr(), &mut s), EffconeStatus::Ok);
        assert!(take(s).contains("\"passed\": true"));
        let cyc = CString::new(
            r#"{"vertices":[{"genus":1,"markings":[2]},{"genus":1,"markings":[2]}],
                "edges":[{"u":0,"v":1,"ord_u":0,"ord_v":-2},{"u":0,"v":1,"ord_u":-2,"ord_v":0}]}"#,
        )
        .unwrap();
        assert_eq!(effcone_twist_check(cyc.as_ptr(), &mut s), EffconeStatus::CheckFailed);
        effcone_string_free(s);
    }
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/effcone.h")).unwrap();
    for name in ["effcone_injectivity_certify", "effcone_last_error", "EFFCONE_STATUS_CHECK_FAILED", "EffconeCertificate"] {
        assert!(h.contains(name), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/effcone.h");
    let dir = std::env::temp_dir().join(format!("effcone-h-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use.c");
    std::fs::write(
        &src,
        format!(
            "#include \"{header}\"\nint main(void) {{ EffconeCertificate *c = 0; \
             return effcone_injectivity_certify(3, 2, EFFCONE_SOURCE_DISPLAYED, &c) == EFFCONE_STATUS_OK ? 0 : 1; }}\n"
        ),
    )
    .unwrap();
    match std::process::Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"]).arg(&src).status() {
        Ok(s) => assert!(s.success(), "header does not compile"),
        Err(_) => eprintln!("no C compiler; skipped"),
    }
}

use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use melcert_ffi::*;

fn last_error() -> String {
    let p = melcert_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn family_lifecycle_and_json_round_trip() {
    unsafe {
        let mut family = ptr::null_mut();
        assert_eq!(melcert_family_for_dimension(8, &mut family), MelcertStatus::Ok);
        assert_eq!((melcert_family_dimension(family), melcert_family_len(family)), (8, 8));

        let mut json = ptr::null_mut();
        assert_eq!(melcert_family_to_json(family, &mut json), MelcertStatus::Ok);
        let mut copy = ptr::null_mut();
        assert_eq!(melcert_family_from_json(json, &mut copy), MelcertStatus::Ok);
        assert_eq!(melcert_family_len(copy), 8);

        let mut a = vec![0.0; 128];
        let mut b = vec![0.0; 128];
        for i in 0..8 {
            assert_eq!(melcert_family_unitary(family, i, a.as_mut_ptr(), a.len()), MelcertStatus::Ok);
            assert_eq!(melcert_family_unitary(copy, i, b.as_mut_ptr(), b.len()), MelcertStatus::Ok);
            assert_eq!(a, b);
        }
        assert_eq!(melcert_family_unitary(family, 8, a.as_mut_ptr(), a.len()), MelcertStatus::MalformedInput);
        assert_eq!(melcert_family_unitary(family, 0, a.as_mut_ptr(), 10), MelcertStatus::MalformedInput);

        melcert_string_free(json);
        melcert_family_free(copy);
        melcert_family_free(family);
    }
}

#[test]
fn named_families_and_errors() {
    unsafe {
        let mut family = ptr::null_mut();
        let d7 = CString::new("d7").unwrap();
        assert_eq!(melcert_family_build(d7.as_ptr(), 0, 0, 0, &mut family), MelcertStatus::Ok);
        assert_eq!(melcert_family_dimension(family), 7);
        let mut report = ptr::null_mut();
        assert_eq!(melcert_certify(family, 1e-9, MelcertConvention::U, &mut report), MelcertStatus::Ok);
        assert!((melcert_report_bound(report) - 1273.0 / 1274.0).abs() < 1e-12);
        assert_eq!(melcert_report_intersection_dim(report), 0);
        melcert_report_free(report);
        melcert_family_free(family);

        let pauli = CString::new("pauli").unwrap();
        assert_eq!(melcert_family_build(pauli.as_ptr(), 3, 0, 3, &mut family), MelcertStatus::Ok);
        let mut report = ptr::null_mut();
        assert_eq!(melcert_certify(family, 1e-9, MelcertConvention::Both, &mut report), MelcertStatus::NotCertified);
        assert_eq!(melcert_report_certified(report), 0);
        melcert_report_free(report);
        melcert_family_free(family);

        assert_eq!(melcert_family_for_dimension(5, &mut family), MelcertStatus::UnsupportedDimension);
        assert!(last_error().contains("d=5"));
        let bogus = CString::new("nope").unwrap();
        assert_eq!(melcert_family_build(bogus.as_ptr(), 0, 0, 0, &mut family), MelcertStatus::MalformedInput);
        let bad = CString::new("{\"d\": 2}").unwrap();
        assert_eq!(melcert_family_from_json(bad.as_ptr(), &mut family), MelcertStatus::MalformedInput);
        assert_eq!(melcert_family_from_json(ptr::null(), &mut family), MelcertStatus::NullPointer);
        assert_eq!(melcert_certify(ptr::null(), 1e-9, MelcertConvention::U, &mut report), MelcertStatus::NullPointer);
        assert!(melcert_report_bound(ptr::null()).is_nan());
        melcert_family_free(ptr::null_mut());
        melcert_report_free(ptr::null_mut());
    }
}

#[test]
fn report_json_validates() {
    unsafe {
        let mut family = ptr::null_mut();
        assert_eq!(melcert_family_for_dimension(6, &mut family), MelcertStatus::Ok);
        let mut report = ptr::null_mut();
        assert_eq!(melcert_certify(family, 1e-9, MelcertConvention::Both, &mut report), MelcertStatus::Ok);
        let mut margins = vec![f64::NAN; melcert_report_margin_count(report)];
        assert_eq!(margins.len(), 6);
        assert_eq!(melcert_report_margins(report, margins.as_mut_ptr(), margins.len()), MelcertStatus::Ok);
        assert!(margins.iter().all(|&m| m >= -1e-10));

        let mut json = ptr::null_mut();
        assert_eq!(melcert_report_to_json(report, &mut json), MelcertStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap();
        let parsed = melcert::io::ReportFileV1::from_json(text).unwrap();
        parsed.validate().unwrap();
        assert_eq!(parsed.margins, margins);
        melcert_string_free(json);
        melcert_report_free(report);
        melcert_family_free(family);
    }
}

#[test]
fn sdp_through_the_c_abi() {
    unsafe {
        let mut family = ptr::null_mut();
        assert_eq!(melcert_family_for_dimension(4, &mut family), MelcertStatus::Ok);
        let mut summary = MelcertSdpSummary::default();
        let status = melcert_sdp_solve(family, MelcertConvention::U, 0, 0.0, 0.0, 0, 0, &mut summary);
        assert_eq!(status, MelcertStatus::Ok);
        assert!(summary.converged == 1 && summary.residual <= 1e-6);
        assert!(summary.primal_value <= 0.876);
        let status = melcert_sdp_solve(family, MelcertConvention::U, 2, 0.0, 1e-14, 0, 0, &mut summary);
        assert_eq!(status, MelcertStatus::NoConvergence);
        let status = melcert_sdp_solve(family, MelcertConvention::Both, 0, 0.0, 0.0, 0, 0, &mut summary);
        assert_eq!(status, MelcertStatus::MalformedInput);
        melcert_family_free(family);

        assert_eq!(melcert_family_for_dimension(10, &mut family), MelcertStatus::Ok);
        let status = melcert_sdp_solve(family, MelcertConvention::U, 0, 0.0, 0.0, 0, 0, &mut summary);
        assert_eq!(status, MelcertStatus::UnsupportedDimension);
        melcert_family_free(family);
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/melcert.h")).unwrap();
    for name in [
        "melcert_family_for_dimension",
        "melcert_family_build",
        "melcert_family_from_json",
        "melcert_certify",
        "melcert_report_margins",
        "melcert_sdp_solve",
        "melcert_last_error_message",
        "MELCERT_STATUS_NOT_CERTIFIED = 3",
        "typedef struct MelcertFamily MelcertFamily",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

/// Directory holding the library artifacts for this test build.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_static_library() {
    let lib_dir = artifact_dir();
    let static_lib = lib_dir.join("libmelcert_ffi.a");
    let Some(cc) = ["cc", "gcc", "clang"].into_iter().find(|c| Command::new(c).arg("--version").output().is_ok())
    else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    if !static_lib.exists() {
        eprintln!("{} not built; skipping", static_lib.display());
        return;
    }
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let out_dir = tempfile::tempdir().unwrap();
    let exe = out_dir.path().join("smoke");
    let status = Command::new(cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&static_lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).contains("0 failures"));
}

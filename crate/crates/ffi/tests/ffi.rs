use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use qiforge_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    qf_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = qf_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_owned()
}

#[test]
fn group_and_ball_roundtrip() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(qf_group_parse(c("Z^2").as_ptr(), &mut g), QfStatus::Ok);
        let mut name = ptr::null_mut();
        assert_eq!(qf_group_name(g, &mut name), QfStatus::Ok);
        assert_eq!(take(name), "Z^2");

        let mut b = ptr::null_mut();
        assert_eq!(qf_ball_new(g, 1, 100, &mut b), QfStatus::Ok);
        let mut n = 0usize;
        assert_eq!(qf_ball_size(b, &mut n), QfStatus::Ok);
        assert_eq!(n, 5);
        let mut s = ptr::null_mut();
        assert_eq!(qf_ball_element(b, 0, &mut s), QfStatus::Ok);
        assert_eq!(take(s), "(0,0)");
        let mut d = 99u32;
        assert_eq!(qf_ball_distance(b, 3, &mut d), QfStatus::Ok);
        assert_eq!(d, 1);
        assert_eq!(qf_ball_word_length(b, c("(1,0)").as_ptr(), &mut d), QfStatus::Ok);
        assert_eq!(d, 1);
        assert_eq!(qf_ball_word_length(b, c("(1,1)").as_ptr(), &mut d), QfStatus::OutOfRange);
        assert_eq!(qf_ball_element(b, 5, &mut s), QfStatus::OutOfRange);
        assert!(last_error().contains("index 5"));
        qf_ball_free(b);
        qf_group_free(g);
    }
}

#[test]
fn errors_map_to_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(qf_group_parse(c("Q").as_ptr(), &mut g), QfStatus::Parse);
        assert!(last_error().starts_with("parse"));
        assert_eq!(qf_group_parse(ptr::null(), &mut g), QfStatus::NullPointer);
        assert_eq!(qf_group_parse(c("BS(1,2)").as_ptr(), &mut g), QfStatus::Ok);
        assert!(qf_last_error().is_null());
        let mut b = ptr::null_mut();
        assert_eq!(qf_ball_new(g, 12, 50, &mut b), QfStatus::Budget);
        assert!(b.is_null());
        let bad = [0xffu8, 0];
        assert_eq!(qf_group_parse(bad.as_ptr().cast(), &mut g), QfStatus::InvalidUtf8);
        qf_group_free(g);
        qf_group_free(ptr::null_mut());
        qf_string_free(ptr::null_mut());
    }
}

#[test]
fn maps_and_matching() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(qf_map_parse(c("floor:2:Z").as_ptr(), &mut f), QfStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(qf_map_apply(f, c("-3").as_ptr(), &mut s), QfStatus::Ok);
        assert_eq!(take(s), "-2");
        let mut pass = false;
        let mut json = ptr::null_mut();
        assert_eq!(qf_audit(f, 30, 10_000, &mut pass, &mut json), QfStatus::Ok);
        assert!(pass);
        assert!(take(json).contains("\"K_claimed\": \"2\""));
        let mut r = 0i64;
        assert_eq!(qf_r_star(f, 20, 40, &mut r), QfStatus::Ok);
        assert_eq!(r, 10);
        assert_eq!(qf_r_star(f, 20, 3, &mut r), QfStatus::Ok);
        assert_eq!(r, -1);
        qf_map_free(f);

        assert_eq!(qf_map_parse(c("incl:2Z").as_ptr(), &mut f), QfStatus::Ok);
        assert_eq!(qf_map_apply(f, c("3").as_ptr(), &mut s), QfStatus::Parse);
        assert!(last_error().contains("3"));
        qf_map_free(f);
        assert_eq!(qf_map_parse(c("fc:2:2").as_ptr(), &mut f), QfStatus::Ok);
        assert_eq!(qf_r_star(f, 4, 4, &mut r), QfStatus::Unsupported);
        qf_map_free(f);
    }
}

#[test]
fn folner_csv() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(qf_group_parse(c("Z").as_ptr(), &mut g), QfStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(qf_folner_profile_csv(g, 2, 1000, &mut s), QfStatus::Ok);
        assert_eq!(
            take(s),
            "i,size,boundary_size,ratio,ratio_decimal\n1,3,2,2/3,0.666667\n2,5,2,2/5,0.400000\n"
        );
        qf_group_free(g);
        let mut v = CStr::from_ptr(qf_version()).to_str().unwrap().to_owned();
        v.retain(|ch| ch != '.');
        assert!(v.chars().all(|ch| ch.is_ascii_digit()));
    }
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/qiforge.h")).unwrap();
    for name in [
        "qf_last_error",
        "qf_string_free",
        "qf_group_parse",
        "qf_ball_new",
        "qf_ball_element",
        "qf_map_parse",
        "qf_r_star",
        "qf_audit",
        "qf_folner_profile_csv",
        "QF_STATUS_BUDGET",
        "typedef struct QfGroup QfGroup",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

/// Compiles the C smoke program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .and_then(|p| p.parent())
        .unwrap()
        .to_path_buf();
    let lib = profile_dir.join("libqiforge_ffi.a");
    if !lib.exists() {
        let status = Command::new(env!("CARGO"))
            .args(["build", "-p", "qiforge-ffi", "--lib"])
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert!(lib.exists(), "{} not built", lib.display());
    let exe = std::env::temp_dir().join(format!("qiforge_smoke_{}", std::process::id()));
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let out = Command::new(cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    let _ = std::fs::remove_file(&exe);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).contains("ok 0.1.0"));
}

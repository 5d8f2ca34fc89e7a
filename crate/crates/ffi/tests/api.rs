use std::ffi::{c_char, CStr, CString};
use std::fs;
use std::path::PathBuf;
use std::ptr;

use startflow_ffi::*;

fn fixture(rel: &str) -> CString {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(rel);
    CString::new(fs::read_to_string(path).unwrap()).unwrap()
}

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { sf_string_free(s) };
    text
}

fn last_error() -> String {
    let p = sf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn parse(rel: &str) -> *mut SfProject {
    let src = fixture(rel);
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { sf_project_parse(src.as_ptr(), &mut p) }, SfStatus::Ok);
    assert!(sf_last_error().is_null());
    p
}

#[test]
fn task_counts_through_the_boundary() {
    let p = parse("valid/caa.sfw");
    for (task, expected) in [("add-certificate", 5), ("check-groups", 2), ("check-certificates", 2)] {
        let name = CString::new(task).unwrap();
        let mut n = 0usize;
        assert_eq!(
            unsafe { sf_project_action_count(p, name.as_ptr(), &mut n) },
            SfStatus::Ok
        );
        assert_eq!(n, expected, "{task}");
    }
    let missing = CString::new("nope").unwrap();
    let mut n = 0usize;
    assert_eq!(
        unsafe { sf_project_action_count(p, missing.as_ptr(), &mut n) },
        SfStatus::NotFound
    );
    assert!(last_error().contains("nope"));
    unsafe { sf_project_free(p) };
}

#[test]
fn outputs_match_goldens() {
    let p = parse("valid/caa.sfw");
    let golden = |name: &str| {
        let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("../core/fixtures/golden/valid")
            .join(name);
        fs::read_to_string(path).unwrap()
    };
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { sf_project_format(p, &mut out) }, SfStatus::Ok);
    assert_eq!(take(out), golden("caa.fmt.sfw"));
    assert_eq!(unsafe { sf_project_dot(p, ptr::null(), &mut out) }, SfStatus::Ok);
    assert_eq!(take(out), golden("caa.dot"));
    assert_eq!(unsafe { sf_project_check(p, ptr::null(), &mut out) }, SfStatus::Ok);
    assert_eq!(take(out), golden("caa.check.json"));
    assert_eq!(unsafe { sf_project_metrics(p, false, &mut out) }, SfStatus::Ok);
    assert_eq!(take(out), golden("caa.metrics.json"));
    unsafe { sf_project_free(p) };
}

#[test]
fn feature_filter_and_config() {
    let p = parse("valid/defects8.sfw");
    let mut out = ptr::null_mut();
    let unknown = CString::new("missing-feature").unwrap();
    assert_eq!(
        unsafe { sf_project_dot(p, unknown.as_ptr(), &mut out) },
        SfStatus::NotFound
    );
    assert!(out.is_null());

    assert_eq!(unsafe { sf_project_check(p, ptr::null(), &mut out) }, SfStatus::Ok);
    let all: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    let config = CString::new(r#"{"disabled": ["R1"]}"#).unwrap();
    assert_eq!(unsafe { sf_project_check(p, config.as_ptr(), &mut out) }, SfStatus::Ok);
    let some: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    let count = |v: &serde_json::Value| v["defects"].as_array().unwrap().len();
    assert_eq!(count(&all), 8);
    assert_eq!(count(&some), 7);

    let bad = CString::new("{not json").unwrap();
    assert_eq!(
        unsafe { sf_project_check(p, bad.as_ptr(), &mut out) },
        SfStatus::Invalid
    );
    assert!(!last_error().is_empty());
    unsafe { sf_project_free(p) };
}

#[test]
fn parse_errors_are_reported() {
    let src = fixture("invalid/broken.sfw");
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { sf_project_parse(src.as_ptr(), &mut p) }, SfStatus::ParseError);
    assert!(p.is_null());
    assert_eq!(last_error().lines().count(), 3);

    let bytes = [0xffu8, 0xfe, 0];
    assert_eq!(
        unsafe { sf_project_parse(bytes.as_ptr().cast(), &mut p) },
        SfStatus::InvalidUtf8
    );
}

#[test]
fn null_arguments_are_rejected() {
    let mut p = ptr::null_mut();
    let mut out = ptr::null_mut();
    let mut n = 0usize;
    unsafe {
        assert_eq!(sf_project_parse(ptr::null(), &mut p), SfStatus::NullArgument);
        assert_eq!(sf_project_format(ptr::null(), &mut out), SfStatus::NullArgument);
        assert_eq!(
            sf_project_action_count(ptr::null(), ptr::null(), &mut n),
            SfStatus::NullArgument
        );
        assert_eq!(
            sf_eval_summarize_csv(ptr::null(), ptr::null(), &mut out),
            SfStatus::NullArgument
        );
        sf_project_free(ptr::null_mut());
        sf_string_free(ptr::null_mut());
    }
    let q = parse("valid/clean.sfw");
    assert_eq!(unsafe { sf_project_format(q, ptr::null_mut()) }, SfStatus::NullArgument);
    unsafe { sf_project_free(q) };
}

#[test]
fn eval_summaries() {
    let forms = fixture("eval/forms.csv");
    let tam = fixture("eval/tam.csv");
    let golden = |name: &str| {
        let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("../core/fixtures/golden/eval")
            .join(name);
        fs::read_to_string(path).unwrap()
    };
    for group in ["control", "experimental"] {
        let g = CString::new(group).unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(
            unsafe { sf_eval_summarize_csv(forms.as_ptr(), g.as_ptr(), &mut out) },
            SfStatus::Ok
        );
        assert_eq!(take(out), golden(&format!("forms.{group}.json")));
        assert_eq!(
            unsafe { sf_tam_summarize_csv(tam.as_ptr(), g.as_ptr(), &mut out) },
            SfStatus::Ok
        );
        assert_eq!(take(out), golden(&format!("tam.{group}.json")));
    }
    let garbage = CString::new("a,b\n1").unwrap();
    let g = CString::new("control").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { sf_tam_summarize_csv(garbage.as_ptr(), g.as_ptr(), &mut out) },
        SfStatus::Invalid
    );
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(sf_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

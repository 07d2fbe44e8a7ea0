use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use dobs_ffi::*;

const CARS_OWL: &str = include_str!("../../core/data/cars.owl");
const QUERY: &str = "q(O):-areClasses(C,O),isDProperty(traction,C).";

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(dobs_last_error()) }.to_str().unwrap().to_owned()
}

fn cars() -> *mut DobsBase {
    let mut base = ptr::null_mut();
    let owl = c(CARS_OWL);
    assert_eq!(unsafe { dobs_base_from_owl(owl.as_ptr(), &mut base) }, DobsStatus::Ok);
    base
}

fn answers(res: *const DobsResult) -> Vec<String> {
    unsafe {
        (0..dobs_result_len(res))
            .map(|i| CStr::from_ptr(dobs_result_answer(res, i)).to_str().unwrap().to_owned())
            .collect()
    }
}

#[test]
fn cars_query_round_trip() {
    unsafe {
        let base = cars();
        assert!(dobs_base_fact_count(base) > 0);
        let mut cat = ptr::null_mut();
        assert_eq!(dobs_catalog_exact(base, &mut cat), DobsStatus::Ok);

        let q = c(QUERY);
        for strategy in [DOBS_STRATEGY_NLJ, DOBS_STRATEGY_BNLJ, DOBS_STRATEGY_HASH, DOBS_STRATEGY_AUTO] {
            let mut res = ptr::null_mut();
            assert_eq!(dobs_query(base, cat, q.as_ptr(), strategy, 4, true, &mut res), DobsStatus::Ok);
            assert_eq!(answers(res), ["q(carsOnt)", "q(source1)", "q(source2)"]);
            assert!(dobs_result_answer(res, 3).is_null());
            dobs_result_free(res);
        }

        let mut res = ptr::null_mut();
        assert_eq!(dobs_query(base, cat, q.as_ptr(), DOBS_STRATEGY_NLJ, 4, true, &mut res), DobsStatus::Ok);
        assert_eq!(dobs_result_actual_cost(res), 12);
        let plan = CStr::from_ptr(dobs_result_plan(res)).to_str().unwrap();
        assert!(plan.starts_with("plan for "));
        dobs_result_free(res);

        let mut res = ptr::null_mut();
        assert_eq!(dobs_query(base, cat, q.as_ptr(), DOBS_STRATEGY_NLJ, 4, false, &mut res), DobsStatus::Ok);
        assert_eq!(dobs_result_actual_cost(res), 29);
        dobs_result_free(res);

        dobs_catalog_free(cat);
        dobs_base_free(base);
    }
}

#[test]
fn catalog_text_round_trip() {
    unsafe {
        let base = cars();
        let mut cat = ptr::null_mut();
        assert_eq!(dobs_catalog_build(base, 0.2, 0.7, 3, &mut cat), DobsStatus::Ok);
        let mut text: *mut c_char = ptr::null_mut();
        assert_eq!(dobs_catalog_to_text(cat, &mut text), DobsStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(dobs_catalog_from_text(text, &mut back), DobsStatus::Ok);
        let mut again: *mut c_char = ptr::null_mut();
        assert_eq!(dobs_catalog_to_text(back, &mut again), DobsStatus::Ok);
        assert_eq!(CStr::from_ptr(text), CStr::from_ptr(again));
        dobs_string_free(text);
        dobs_string_free(again);
        dobs_catalog_free(back);
        dobs_catalog_free(cat);
        dobs_base_free(base);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut base = ptr::null_mut();
        let bad = c("isClass(a).");
        assert_eq!(dobs_base_from_dob(bad.as_ptr(), &mut base), DobsStatus::Parse);
        assert!(base.is_null());
        assert!(last_error().contains("isClass expects 2 arguments"), "{}", last_error());
        assert_eq!(dobs_base_from_dob(ptr::null(), &mut base), DobsStatus::NullArgument);
        let ok = c("isOntology(o).");
        assert_eq!(dobs_base_from_dob(ok.as_ptr(), ptr::null_mut()), DobsStatus::NullArgument);

        let invalid = [0xffu8, 0];
        assert_eq!(
            dobs_base_from_dob(invalid.as_ptr().cast(), &mut base),
            DobsStatus::InvalidUtf8
        );

        let base = cars();
        let mut cat = ptr::null_mut();
        assert_eq!(dobs_catalog_build(base, -1.0, 0.7, 1, &mut cat), DobsStatus::InvalidConfig);
        assert!(cat.is_null());
        assert_eq!(dobs_catalog_exact(base, &mut cat), DobsStatus::Ok);
        assert_eq!(last_error(), "");

        let q = c(QUERY);
        let mut res = ptr::null_mut();
        assert_eq!(dobs_query(base, cat, q.as_ptr(), 9, 4, true, &mut res), DobsStatus::InvalidConfig);
        assert!(res.is_null());
        assert_eq!(dobs_query(base, ptr::null(), q.as_ptr(), 0, 4, true, &mut res), DobsStatus::NullArgument);
        let unsafe_q = c("q(X):-areClasses(C,O).");
        assert_eq!(dobs_query(base, cat, unsafe_q.as_ptr(), 0, 4, true, &mut res), DobsStatus::Parse);
        assert!(last_error().contains('X'), "{}", last_error());

        dobs_catalog_free(cat);
        dobs_base_free(base);
    }
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        dobs_base_free(ptr::null_mut());
        dobs_catalog_free(ptr::null_mut());
        dobs_result_free(ptr::null_mut());
        dobs_string_free(ptr::null_mut());
        assert_eq!(dobs_base_fact_count(ptr::null()), 0);
        assert_eq!(dobs_result_len(ptr::null()), 0);
        assert!(dobs_result_plan(ptr::null()).is_null());
        assert!(dobs_result_estimated_cost(ptr::null()).is_nan());
    }
}

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<this test>
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

fn have(tool: &str) -> bool {
    Command::new(tool).arg("--version").output().is_ok()
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/dobs.h")).unwrap();
    for f in ["dobs_base_from_owl", "dobs_catalog_build", "dobs_query", "dobs_result_answer", "dobs_last_error"] {
        assert!(header.contains(&format!("{f}(")), "{f} missing");
    }
    assert!(header.contains("typedef struct DobsBase DobsBase;"));
}

#[test]
fn c_program_links_against_static_library() {
    let lib = target_dir().join("libdobs_ffi.a");
    if !have("cc") || !lib.exists() {
        eprintln!("skipped: no C compiler or static library at {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout, "q(suv)\nerror: 1:7: unknown predicate nope\n");
}

//! C interface to `dobs-core`.
//!
//! Every fallible call returns a [`DobsStatus`]; on failure the message is
//! available from [`dobs_last_error`] on the same thread. Handles are opaque
//! and released with their matching `_free` function. Strings returned as
//! `char *` are owned by the caller and released with [`dobs_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dobs_core::analyzer::{build_catalog, exact_catalog, SamplingConfig, StatisticsCatalog};
use dobs_core::cost::JoinStrategy;
use dobs_core::executor::{execute_scoped, MemoScope};
use dobs_core::frontends::{parse_dob, parse_owl_documents, parse_query, translate_owl};
use dobs_core::optimizer::{optimize, Plan};
use dobs_core::{Error, OntologyBase, ParseError};

pub const DOBS_STRATEGY_NLJ: u32 = 0;
pub const DOBS_STRATEGY_BNLJ: u32 = 1;
pub const DOBS_STRATEGY_HASH: u32 = 2;
/// All three strategies, cheapest per step.
pub const DOBS_STRATEGY_AUTO: u32 = 3;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DobsStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    /// Unknown predicate, arity mismatch, unsafe query and similar.
    InvalidInput = 4,
    InvalidConfig = 5,
    ResourceExhausted = 6,
    Io = 7,
    Panic = 8,
}

/// An ontology base.
pub struct DobsBase(OntologyBase);

/// A statistics catalog.
pub struct DobsCatalog(StatisticsCatalog);

/// Answers and counters of one query run.
pub struct DobsResult {
    answers: Vec<CString>,
    plan: CString,
    actual_cost: u64,
    estimated_cost: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let mut bytes = msg.into();
    bytes.retain(|&b| b != 0);
    let s = CString::new(bytes).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

struct Failure(DobsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse(_) | Error::CatalogFormat { .. } => DobsStatus::Parse,
            Error::InvalidConfig(_) | Error::TooManySubgoals { .. } => DobsStatus::InvalidConfig,
            Error::ResourceExhausted { .. } => DobsStatus::ResourceExhausted,
            Error::Io(_) | Error::Csv(_) => DobsStatus::Io,
            _ => DobsStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure(DobsStatus::Parse, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(DobsStatus::NullArgument, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DobsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            DobsStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            DobsStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(DobsStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_ptr<'a, T>(p: *mut *mut T, what: &str) -> Result<&'a mut *mut T, Failure> {
    let out = p.as_mut().ok_or_else(|| null(what))?;
    *out = ptr::null_mut();
    Ok(out)
}

fn cstring(s: String) -> CString {
    CString::new(s).unwrap_or_default()
}

/// Message of the last failed call on this thread, or an empty string.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn dobs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dobs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads a base from DOB fact text.
///
/// # Safety
/// `dob` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dobs_base_from_dob(dob: *const c_char, out: *mut *mut DobsBase) -> DobsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let facts = parse_dob(text(dob, "dob")?)?;
        *out = Box::into_raw(Box::new(DobsBase(OntologyBase::from_facts(&facts)?)));
        Ok(())
    })
}

/// Loads a base from OWL abstract-syntax text, translating every document.
///
/// # Safety
/// `owl` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dobs_base_from_owl(owl: *const c_char, out: *mut *mut DobsBase) -> DobsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let docs = parse_owl_documents(text(owl, "owl")?)?;
        let facts: Vec<_> = docs.iter().flat_map(translate_owl).collect();
        *out = Box::into_raw(Box::new(DobsBase(OntologyBase::from_facts(&facts)?)));
        Ok(())
    })
}

/// Number of stored EOB facts.
///
/// # Safety
/// `base` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn dobs_base_fact_count(base: *const DobsBase) -> usize {
    base.as_ref().map_or(0, |b| b.0.fact_count())
}

/// # Safety
/// `base` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dobs_base_free(base: *mut DobsBase) {
    if !base.is_null() {
        drop(Box::from_raw(base));
    }
}

/// Builds a sampled catalog. Other sampling parameters take their defaults.
///
/// # Safety
/// `base` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dobs_catalog_build(
    base: *const DobsBase,
    error: f64,
    confidence: f64,
    seed: u64,
    out: *mut *mut DobsCatalog,
) -> DobsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let base = handle(base, "base")?;
        let cfg = SamplingConfig {
            d: error,
            p: confidence,
            seed,
            ..SamplingConfig::default()
        };
        *out = Box::into_raw(Box::new(DobsCatalog(build_catalog(&base.0, &cfg)?)));
        Ok(())
    })
}

/// Builds a catalog by enumerating every partition.
///
/// # Safety
/// `base` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dobs_catalog_exact(base: *const DobsBase, out: *mut *mut DobsCatalog) -> DobsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let base = handle(base, "base")?;
        *out = Box::into_raw(Box::new(DobsCatalog(exact_catalog(&base.0)?)));
        Ok(())
    })
}

/// Reads a catalog in the text format written by [`dobs_catalog_to_text`].
///
/// # Safety
/// `text_in` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dobs_catalog_from_text(text_in: *const c_char, out: *mut *mut DobsCatalog) -> DobsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let cat = StatisticsCatalog::from_text(text(text_in, "text")?)?;
        *out = Box::into_raw(Box::new(DobsCatalog(cat)));
        Ok(())
    })
}

/// # Safety
/// `catalog` must be a live handle; `out` must be writable. Free the
/// string with [`dobs_string_free`].
#[no_mangle]
pub unsafe extern "C" fn dobs_catalog_to_text(catalog: *const DobsCatalog, out: *mut *mut c_char) -> DobsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let cat = handle(catalog, "catalog")?;
        *out = cstring(cat.0.to_text()).into_raw();
        Ok(())
    })
}

/// # Safety
/// `catalog` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dobs_catalog_free(catalog: *mut DobsCatalog) {
    if !catalog.is_null() {
        drop(Box::from_raw(catalog));
    }
}

/// Optimizes and runs a conjunctive query such as `q(O):-areClasses(C,O).`.
///
/// `strategy` is one of the `DOBS_STRATEGY_*` constants; `block_size` is
/// used by the block nested loop. Set `optimize_order` to 0 to keep the
/// body in its written order.
///
/// # Safety
/// `base` and `catalog` must be live handles, `query` a NUL-terminated
/// string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dobs_query(
    base: *const DobsBase,
    catalog: *const DobsCatalog,
    query: *const c_char,
    strategy: u32,
    block_size: usize,
    optimize_order: bool,
    out: *mut *mut DobsResult,
) -> DobsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let base = handle(base, "base")?;
        let cat = handle(catalog, "catalog")?;
        let q = parse_query(text(query, "query")?)?;
        let enabled = match strategy {
            DOBS_STRATEGY_NLJ => vec![JoinStrategy::NestedLoop],
            DOBS_STRATEGY_BNLJ => vec![JoinStrategy::BlockNestedLoop { block_size }],
            DOBS_STRATEGY_HASH => vec![JoinStrategy::HashJoin],
            DOBS_STRATEGY_AUTO => JoinStrategy::all(block_size),
            s => return Err(Failure(DobsStatus::InvalidConfig, format!("unknown strategy {s}"))),
        };
        let plan = if optimize_order {
            optimize(&q, &cat.0, &enabled)?
        } else {
            Plan::greedy(&q, &cat.0, (0..q.body.len()).collect(), &enabled)?
        };
        let report = execute_scoped(&base.0, &plan, MemoScope::Probe)?;
        *out = Box::into_raw(Box::new(DobsResult {
            answers: report.answers.iter().map(|a| cstring(a.to_string())).collect(),
            plan: cstring(plan.explain()),
            actual_cost: report.actual_cost,
            estimated_cost: plan.estimate.cost,
        }));
        Ok(())
    })
}

/// # Safety
/// `result` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn dobs_result_len(result: *const DobsResult) -> usize {
    result.as_ref().map_or(0, |r| r.answers.len())
}

/// Answer `index` as text, owned by the result. Null when out of range.
///
/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn dobs_result_answer(result: *const DobsResult, index: usize) -> *const c_char {
    result
        .as_ref()
        .and_then(|r| r.answers.get(index))
        .map_or(ptr::null(), |s| s.as_ptr())
}

/// The executed plan as printed by `dobs query --explain`, owned by the result.
///
/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn dobs_result_plan(result: *const DobsResult) -> *const c_char {
    result.as_ref().map_or(ptr::null(), |r| r.plan.as_ptr())
}

/// Inferred IOB facts plus EOB facts accessed.
///
/// # Safety
/// `result` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn dobs_result_actual_cost(result: *const DobsResult) -> u64 {
    result.as_ref().map_or(0, |r| r.actual_cost)
}

/// # Safety
/// `result` must be a live handle or null (returns NaN).
#[no_mangle]
pub unsafe extern "C" fn dobs_result_estimated_cost(result: *const DobsResult) -> f64 {
    result.as_ref().map_or(f64::NAN, |r| r.estimated_cost)
}

/// # Safety
/// `result` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dobs_result_free(result: *mut DobsResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

//! C ABI over `sumset-core`.
//!
//! Sets, verification reports and search reports cross the boundary as opaque
//! heap handles that the caller releases with the matching `*_free`
//! function. Every fallible call returns a [`SumsetStatus`]; the message for
//! the most recent failure on the calling thread is available from
//! [`sumset_last_error`]. Panics never unwind into C.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sumset_core::cli::exit_code_for;
use sumset_core::harness::GeneratorSpec;
use sumset_core::search::{ExhaustiveParams, StochasticParams};
use sumset_core::{
    exhaustive_search, ksum_count, ksum_multiplicity, ksum_set, ratio_check, stochastic_search,
    verify_counting_chain, IntegerSet, RatioVerdict, SearchReport, SumsetError, VerificationReport,
};

/// Status codes. The nonzero input/budget/internal values match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumsetStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    BudgetExceeded = 3,
    InternalViolation = 4,
    /// The caller's buffer is too small; the required length was written.
    BufferTooSmall = 5,
    Panic = 6,
}

/// Opaque integer set.
pub struct SumsetSet(IntegerSet);

/// Opaque counting-chain verification report.
pub struct SumsetVerification {
    report: VerificationReport,
}

/// Opaque search report.
pub struct SumsetSearch {
    report: SearchReport,
}

/// Exact ratio verdict; mirrors `RatioVerdict` without the set.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SumsetRatioVerdict {
    pub n: usize,
    pub k: usize,
    pub size_k: u64,
    pub size_k1: u64,
    /// (k+1)·|(k+1)∧A|
    pub lhs_cross: u64,
    /// (n−k)·|k∧A|
    pub rhs_cross: u64,
    pub holds: bool,
    pub equality: bool,
    pub hyp_theorem: bool,
    pub hyp_question: bool,
}

impl From<&RatioVerdict> for SumsetRatioVerdict {
    fn from(v: &RatioVerdict) -> Self {
        SumsetRatioVerdict {
            n: v.n,
            k: v.k,
            size_k: v.size_k,
            size_k1: v.size_k1,
            lhs_cross: v.lhs_cross,
            rhs_cross: v.rhs_cross,
            holds: v.holds,
            equality: v.equality,
            hyp_theorem: v.hyp_theorem,
            hyp_question: v.hyp_question,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn fail(err: SumsetError) -> SumsetStatus {
    let status = match exit_code_for(&err) {
        3 => SumsetStatus::BudgetExceeded,
        _ => SumsetStatus::InvalidInput,
    };
    set_last_error(err.to_string());
    status
}

fn null(what: &str) -> SumsetStatus {
    set_last_error(format!("{what} is null"));
    SumsetStatus::NullPointer
}

/// Runs `f`, turning panics into `SumsetStatus::Panic`.
fn guard(f: impl FnOnce() -> SumsetStatus) -> SumsetStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("panic inside sumset library");
            SumsetStatus::Panic
        }
    }
}

unsafe fn set_ref<'a>(set: *const SumsetSet) -> Option<&'a IntegerSet> {
    set.as_ref().map(|s| &s.0)
}

unsafe fn c_str<'a>(s: *const c_char) -> Option<Result<&'a str, SumsetError>> {
    if s.is_null() {
        return None;
    }
    Some(CStr::from_ptr(s).to_str().map_err(|e| SumsetError::Parse {
        input: "<c string>".into(),
        reason: e.to_string(),
    }))
}

/// Copies `values` into a caller buffer, always reporting the full length.
unsafe fn copy_out<T: Copy>(
    values: &[T],
    buf: *mut T,
    cap: usize,
    out_len: *mut usize,
) -> SumsetStatus {
    if out_len.is_null() {
        return null("out_len");
    }
    *out_len = values.len();
    if values.len() > cap {
        set_last_error(format!("buffer holds {cap}, need {}", values.len()));
        return SumsetStatus::BufferTooSmall;
    }
    if !values.is_empty() {
        if buf.is_null() {
            return null("buf");
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    }
    SumsetStatus::Ok
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn sumset_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sumset_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Builds a set from `len` integers in any order. Duplicates are rejected.
#[no_mangle]
pub unsafe extern "C" fn sumset_set_new(
    elements: *const i64,
    len: usize,
    out: *mut *mut SumsetSet,
) -> SumsetStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        if elements.is_null() && len > 0 {
            return null("elements");
        }
        let values = if len == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(elements, len).to_vec()
        };
        match IntegerSet::new(values) {
            Ok(set) => {
                *out = Box::into_raw(Box::new(SumsetSet(set)));
                SumsetStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Parses the comma-separated textual form, e.g. `"1,2,4,8"`.
#[no_mangle]
pub unsafe extern "C" fn sumset_set_parse(
    text: *const c_char,
    out: *mut *mut SumsetSet,
) -> SumsetStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        let Some(text) = c_str(text) else {
            return null("text");
        };
        match text.and_then(str::parse::<IntegerSet>) {
            Ok(set) => {
                *out = Box::into_raw(Box::new(SumsetSet(set)));
                SumsetStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Runs a generator spec such as `"gp:n=5,r=2,a0=1"`; `seed` is used when a
/// random spec carries none.
#[no_mangle]
pub unsafe extern "C" fn sumset_set_generate(
    spec: *const c_char,
    seed: u64,
    out: *mut *mut SumsetSet,
) -> SumsetStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        let Some(spec) = c_str(spec) else {
            return null("spec");
        };
        let set = spec
            .and_then(str::parse::<GeneratorSpec>)
            .and_then(|g| g.with_default_seed(seed).generate());
        match set {
            Ok(set) => {
                *out = Box::into_raw(Box::new(SumsetSet(set)));
                SumsetStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn sumset_set_free(set: *mut SumsetSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Cardinality, or 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn sumset_set_len(set: *const SumsetSet) -> usize {
    set_ref(set).map_or(0, IntegerSet::len)
}

/// Sorted elements into `buf`; `*out_len` receives the element count.
#[no_mangle]
pub unsafe extern "C" fn sumset_set_elements(
    set: *const SumsetSet,
    buf: *mut i64,
    cap: usize,
    out_len: *mut usize,
) -> SumsetStatus {
    guard(|| match set_ref(set) {
        Some(s) => copy_out(s.elements(), buf, cap, out_len),
        None => null("set"),
    })
}

/// `|k∧A|`.
#[no_mangle]
pub unsafe extern "C" fn sumset_ksum_count(
    set: *const SumsetSet,
    k: usize,
    out: *mut u64,
) -> SumsetStatus {
    guard(|| {
        let Some(s) = set_ref(set) else {
            return null("set");
        };
        if out.is_null() {
            return null("out");
        }
        match ksum_count(s, k) {
            Ok(c) => {
                *out = c;
                SumsetStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// The sorted values of `k∧A`. Call with `cap = 0` to learn the length.
#[no_mangle]
pub unsafe extern "C" fn sumset_ksum_values(
    set: *const SumsetSet,
    k: usize,
    buf: *mut i64,
    cap: usize,
    out_len: *mut usize,
) -> SumsetStatus {
    guard(|| {
        let Some(s) = set_ref(set) else {
            return null("set");
        };
        match ksum_set(s, k) {
            Ok(values) => copy_out(&values, buf, cap, out_len),
            Err(e) => fail(e),
        }
    })
}

/// Capped multiplicities of `k`-sums, over `A ∖ {exclude}` when
/// `has_exclude` is set. Sums go to `sums`, counts to `counts`, both of
/// capacity `cap_len`.
#[no_mangle]
pub unsafe extern "C" fn sumset_ksum_multiplicity(
    set: *const SumsetSet,
    k: usize,
    cap: u32,
    has_exclude: bool,
    exclude: i64,
    sums: *mut i64,
    counts: *mut u32,
    cap_len: usize,
    out_len: *mut usize,
) -> SumsetStatus {
    guard(|| {
        let Some(s) = set_ref(set) else {
            return null("set");
        };
        let table = match ksum_multiplicity(s, k, cap, has_exclude.then_some(exclude)) {
            Ok(t) => t,
            Err(e) => return fail(e),
        };
        let keys: Vec<i64> = table.entries.keys().copied().collect();
        let values: Vec<u32> = table.entries.values().copied().collect();
        match copy_out(&keys, sums, cap_len, out_len) {
            SumsetStatus::Ok => copy_out(&values, counts, cap_len, out_len),
            other => other,
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn sumset_ratio_check(
    set: *const SumsetSet,
    k: usize,
    out: *mut SumsetRatioVerdict,
) -> SumsetStatus {
    guard(|| {
        let Some(s) = set_ref(set) else {
            return null("set");
        };
        if out.is_null() {
            return null("out");
        }
        match ratio_check(s, k) {
            Ok(v) => {
                *out = SumsetRatioVerdict::from(&v);
                SumsetStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Builds the extension graphs and checks the counting chain. A report whose
/// inequalities fail is still returned with `SUMSET_STATUS_OK`.
#[no_mangle]
pub unsafe extern "C" fn sumset_verify_chain(
    set: *const SumsetSet,
    k: usize,
    out: *mut *mut SumsetVerification,
) -> SumsetStatus {
    guard(|| {
        let Some(s) = set_ref(set) else {
            return null("set");
        };
        if out.is_null() {
            return null("out");
        }
        match verify_counting_chain(s, k) {
            Ok(report) => {
                *out = Box::into_raw(Box::new(SumsetVerification { report }));
                SumsetStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// True iff every counting-chain inequality holds.
#[no_mangle]
pub unsafe extern "C" fn sumset_verification_chain_holds(v: *const SumsetVerification) -> bool {
    v.as_ref().is_some_and(|v| v.report.chain_holds)
}

/// True iff `(k+1)|(k+1)∧A| ≤ (n−k)|k∧A|` for the verified instance.
#[no_mangle]
pub unsafe extern "C" fn sumset_verification_conclusion_holds(
    v: *const SumsetVerification,
) -> bool {
    v.as_ref().is_some_and(|v| v.report.conclusion.holds)
}

#[no_mangle]
pub unsafe extern "C" fn sumset_verification_edge_counts(
    v: *const SumsetVerification,
    e_g: *mut u64,
    e_h: *mut u64,
) -> SumsetStatus {
    guard(|| {
        let Some(v) = v.as_ref() else {
            return null("report");
        };
        if e_g.is_null() || e_h.is_null() {
            return null("out");
        }
        *e_g = v.report.e_g;
        *e_h = v.report.e_h;
        SumsetStatus::Ok
    })
}

/// JSON serialization; release with [`sumset_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sumset_verification_to_json(v: *const SumsetVerification) -> *mut c_char {
    match v.as_ref() {
        Some(v) => into_c_string(serde_json::to_string(&v.report).unwrap_or_default()),
        None => ptr::null_mut(),
    }
}

#[no_mangle]
pub unsafe extern "C" fn sumset_verification_free(v: *mut SumsetVerification) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Every `n`-subset of `{1..universe}`; fails with
/// `SUMSET_STATUS_BUDGET_EXCEEDED` when `C(universe, n) > budget`.
#[no_mangle]
pub unsafe extern "C" fn sumset_exhaustive_search(
    universe: u64,
    n: usize,
    k: usize,
    budget: u64,
    canonical: bool,
    out: *mut *mut SumsetSearch,
) -> SumsetStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        let mut params = ExhaustiveParams::new(universe, n, k);
        params.budget = budget as u128;
        params.canonical = canonical;
        match exhaustive_search(&params) {
            Ok(report) => {
                *out = Box::into_raw(Box::new(SumsetSearch { report }));
                SumsetStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Seeded hill climbing over `n`-sets in `[lo, hi]` with `budget` evaluations.
#[no_mangle]
pub unsafe extern "C" fn sumset_stochastic_search(
    n: usize,
    k: usize,
    lo: i64,
    hi: i64,
    seed: u64,
    budget: u64,
    out: *mut *mut SumsetSearch,
) -> SumsetStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        match stochastic_search(&StochasticParams::new(n, k, lo, hi, seed, budget)) {
            Ok(report) => {
                *out = Box::into_raw(Box::new(SumsetSearch { report }));
                SumsetStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn sumset_search_instances_checked(s: *const SumsetSearch) -> u64 {
    s.as_ref().map_or(0, |s| s.report.instances_checked)
}

#[no_mangle]
pub unsafe extern "C" fn sumset_search_counterexample_count(s: *const SumsetSearch) -> usize {
    s.as_ref().map_or(0, |s| s.report.counterexamples.len())
}

/// Verdict and elements of the best set found.
#[no_mangle]
pub unsafe extern "C" fn sumset_search_best(
    s: *const SumsetSearch,
    verdict: *mut SumsetRatioVerdict,
    elements: *mut i64,
    cap: usize,
    out_len: *mut usize,
) -> SumsetStatus {
    guard(|| {
        let Some(s) = s.as_ref() else {
            return null("search");
        };
        let Some(best) = &s.report.best else {
            set_last_error("search evaluated no sets");
            return SumsetStatus::InvalidInput;
        };
        if verdict.is_null() {
            return null("verdict");
        }
        *verdict = SumsetRatioVerdict::from(best);
        copy_out(best.set.elements(), elements, cap, out_len)
    })
}

/// JSON serialization; release with [`sumset_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sumset_search_to_json(s: *const SumsetSearch) -> *mut c_char {
    match s.as_ref() {
        Some(s) => into_c_string(serde_json::to_string(&s.report).unwrap_or_default()),
        None => ptr::null_mut(),
    }
}

#[no_mangle]
pub unsafe extern "C" fn sumset_search_free(s: *mut SumsetSearch) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Releases strings returned by the `*_to_json` functions.
#[no_mangle]
pub unsafe extern "C" fn sumset_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

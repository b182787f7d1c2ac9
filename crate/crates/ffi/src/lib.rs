//! C ABI for the preclusion library.
//!
//! Design rules, uniform across the surface:
//!
//! - Every fallible function returns a [`PrStatus`] and writes results
//!   through out-pointers. `PR_STATUS_OK` (0) means every out-parameter was
//!   written; on any other status the out-parameters are untouched.
//! - Handles (`PrRule`, `PrEnsemble`) are opaque. They are created by a
//!   `_new`/constructor call, must be released with the matching `_free`,
//!   and are never invalidated by read-only calls. A `NULL` handle is
//!   rejected with `PR_STATUS_NULL_POINTER`, never dereferenced.
//! - `pr_status_message` gives a static description of a status code;
//!   `pr_last_error_message` gives the detailed, per-thread message of the
//!   most recent failure on the calling thread.
//! - No callbacks, no global state beyond the per-thread error message, and
//!   no allocation visible to the caller except through handles.
//!
//! Complex matrices cross the boundary as two row-major `double` arrays
//! (real and imaginary parts), `dim * dim` entries each; vectors as two
//! `dim`-entry arrays.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use preclusion::ndarray::Array2;
use preclusion::{
    build_ensemble, exists, exists_log, find_nb, heisenberg_weight, survivor_report, weight,
    BranchEnsemble, Complex64, Error, FrequencyBinning, PreclusionRule, Projector,
    QubitPreparation, StateVector, UnitaryMatrix,
};

/// Result code of every fallible call in this ABI.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrStatus {
    /// The call succeeded and all out-parameters were written.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// An argument violated a documented invariant (normalization,
    /// projector axioms, ranges, dimension agreement, ...).
    InvalidArgument = 2,
    /// The computation itself reported a terminal outcome: every branch is
    /// precluded, persistently, under the active rule.
    Computational = 3,
    /// A caller-provided buffer is too short for the requested data.
    BufferTooSmall = 4,
    /// An internal invariant failed; the library state is unharmed but the
    /// call produced nothing. Please report the message.
    Internal = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(status: PrStatus, message: &str) -> PrStatus {
    set_last_error(message);
    status
}

fn fail_error(e: &Error) -> PrStatus {
    let status = if e.is_computational() {
        PrStatus::Computational
    } else {
        PrStatus::InvalidArgument
    };
    fail(status, &e.to_string())
}

/// Run `body` with panics converted to `PR_STATUS_INTERNAL` so unwinding
/// never crosses the ABI boundary.
fn guarded(body: impl FnOnce() -> PrStatus) -> PrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "internal panic".to_string());
            fail(PrStatus::Internal, &message)
        }
    }
}

macro_rules! require_non_null {
    ($($ptr:expr),+ $(,)?) => {
        $(
            if $ptr.is_null() {
                return fail(
                    PrStatus::NullPointer,
                    concat!("argument `", stringify!($ptr), "` is NULL"),
                );
            }
        )+
    };
}

/// Library version, e.g. "0.1.0". Static storage; do not free.
#[no_mangle]
pub extern "C" fn pr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Static, one-line description of a status code. Do not free.
#[no_mangle]
pub extern "C" fn pr_status_message(status: PrStatus) -> *const c_char {
    let text: &'static str = match status {
        PrStatus::Ok => "ok\0",
        PrStatus::NullPointer => "a required pointer argument was NULL\0",
        PrStatus::InvalidArgument => "an argument violated a documented invariant\0",
        PrStatus::Computational => "the computation reported a terminal outcome\0",
        PrStatus::BufferTooSmall => "a caller-provided buffer is too short\0",
        PrStatus::Internal => "an internal invariant failed\0",
    };
    text.as_ptr() as *const c_char
}

/// Detailed message of the most recent failing call **on this thread**.
/// Valid until the next failing call on the same thread; empty string when
/// nothing failed yet. Do not free.
#[no_mangle]
pub extern "C" fn pr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

/// Opaque existence rule. Create with `pr_rule_zero` /
/// `pr_rule_positive` / `pr_rule_positive_log10`, release with
/// `pr_rule_free`.
pub struct PrRule {
    inner: PreclusionRule,
}

fn rule_out(rule: PreclusionRule, out: *mut *mut PrRule) -> PrStatus {
    let boxed = Box::new(PrRule { inner: rule });
    // Safety: `out` was null-checked by the caller of this helper.
    unsafe { *out = Box::into_raw(boxed) };
    PrStatus::Ok
}

/// Create the zero rule: a branch exists iff its weight is nonzero.
///
/// # Safety
/// `out` must be a valid pointer to a `PrRule*`.
#[no_mangle]
pub unsafe extern "C" fn pr_rule_zero(out: *mut *mut PrRule) -> PrStatus {
    guarded(|| {
        require_non_null!(out);
        rule_out(PreclusionRule::zero(), out)
    })
}

/// Create a positive rule with threshold `eps` (0 < eps < 1): a branch is
/// precluded iff its weight is <= eps (boundary inclusive).
///
/// # Safety
/// `out` must be a valid pointer to a `PrRule*`.
#[no_mangle]
pub unsafe extern "C" fn pr_rule_positive(eps: f64, out: *mut *mut PrRule) -> PrStatus {
    guarded(|| {
        require_non_null!(out);
        match PreclusionRule::positive(eps) {
            Ok(rule) => rule_out(rule, out),
            Err(e) => fail_error(&e),
        }
    })
}

/// Create a positive rule from log10(eps), for thresholds too small to
/// represent as a double (for example log10_eps = -400).
///
/// # Safety
/// `out` must be a valid pointer to a `PrRule*`.
#[no_mangle]
pub unsafe extern "C" fn pr_rule_positive_log10(
    log10_eps: f64,
    out: *mut *mut PrRule,
) -> PrStatus {
    guarded(|| {
        require_non_null!(out);
        match PreclusionRule::positive_log10(log10_eps) {
            Ok(rule) => rule_out(rule, out),
            Err(e) => fail_error(&e),
        }
    })
}

/// Whether the rule is a positive rule (writes 1) or the zero rule (0).
///
/// # Safety
/// `rule` must be a live handle from a `pr_rule_*` constructor; `out` must
/// be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pr_rule_is_positive(rule: *const PrRule, out: *mut bool) -> PrStatus {
    guarded(|| {
        require_non_null!(rule, out);
        unsafe { *out = (*rule).inner.is_positive() };
        PrStatus::Ok
    })
}

/// Release a rule handle. NULL is accepted and ignored.
///
/// # Safety
/// `rule` must be NULL or a handle from a `pr_rule_*` constructor that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn pr_rule_free(rule: *mut PrRule) {
    if !rule.is_null() {
        drop(unsafe { Box::from_raw(rule) });
    }
}

// ---------------------------------------------------------------------------
// Weights and existence
// ---------------------------------------------------------------------------

/// Existence verdict for one weight under one rule.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PrVerdict {
    /// 1 if the branch exists under the rule, 0 if it is precluded.
    pub exists: bool,
    /// The weight, in linear scale (may underflow to 0 for log input).
    pub weight: f64,
    /// The weight's natural logarithm (-inf for weight 0).
    pub log_weight: f64,
    /// 1 if the weight is exactly 0 or small enough to be numerically
    /// indistinguishable from 0 in linear scale.
    pub indistinguishable_from_zero: bool,
}

unsafe fn read_state(
    dim: usize,
    state_re: *const f64,
    state_im: *const f64,
) -> Result<StateVector, Error> {
    let re = unsafe { std::slice::from_raw_parts(state_re, dim) };
    let im = unsafe { std::slice::from_raw_parts(state_im, dim) };
    StateVector::new(
        re.iter()
            .zip(im)
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect(),
    )
}

unsafe fn read_matrix(dim: usize, mat_re: *const f64, mat_im: *const f64) -> Array2<Complex64> {
    let re = unsafe { std::slice::from_raw_parts(mat_re, dim * dim) };
    let im = unsafe { std::slice::from_raw_parts(mat_im, dim * dim) };
    let flat: Vec<Complex64> = re
        .iter()
        .zip(im)
        .map(|(&r, &i)| Complex64::new(r, i))
        .collect();
    Array2::from_shape_vec((dim, dim), flat).expect("length is dim*dim by construction")
}

/// Weight of the outcome `projector` on `state`: the Born weight
/// <state | P | state>. The state must be normalized and the projector
/// Hermitian and idempotent (both within 1e-12).
///
/// `state_re`/`state_im` hold `dim` entries; `projector_re`/`projector_im`
/// hold `dim * dim` entries in row-major order.
///
/// # Safety
/// All array pointers must reference readable memory of the stated length,
/// and `out_weight` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pr_weight(
    dim: usize,
    state_re: *const f64,
    state_im: *const f64,
    projector_re: *const f64,
    projector_im: *const f64,
    out_weight: *mut f64,
) -> PrStatus {
    guarded(|| {
        require_non_null!(state_re, state_im, projector_re, projector_im, out_weight);
        if dim == 0 {
            return fail_error(&Error::ZeroDimension);
        }
        let state = match unsafe { read_state(dim, state_re, state_im) } {
            Ok(s) => s,
            Err(e) => return fail_error(&e),
        };
        let projector = match Projector::new(unsafe { read_matrix(dim, projector_re, projector_im) }) {
            Ok(p) => p,
            Err(e) => return fail_error(&e),
        };
        match weight(&state, &projector) {
            Ok(w) => {
                unsafe { *out_weight = w };
                PrStatus::Ok
            }
            Err(e) => fail_error(&e),
        }
    })
}

/// The same weight computed in the Heisenberg picture: the projector is
/// conjugated by the unitary `evolution` and evaluated in the *initial*
/// state. Agrees with `pr_weight` applied to the evolved state.
///
/// # Safety
/// As for `pr_weight`; `unitary_re`/`unitary_im` hold `dim * dim` row-major
/// entries of a matrix that is unitary within 1e-12.
#[no_mangle]
pub unsafe extern "C" fn pr_heisenberg_weight(
    dim: usize,
    state_re: *const f64,
    state_im: *const f64,
    unitary_re: *const f64,
    unitary_im: *const f64,
    projector_re: *const f64,
    projector_im: *const f64,
    out_weight: *mut f64,
) -> PrStatus {
    guarded(|| {
        require_non_null!(
            state_re,
            state_im,
            unitary_re,
            unitary_im,
            projector_re,
            projector_im,
            out_weight,
        );
        if dim == 0 {
            return fail_error(&Error::ZeroDimension);
        }
        let state = match unsafe { read_state(dim, state_re, state_im) } {
            Ok(s) => s,
            Err(e) => return fail_error(&e),
        };
        let evolution = match UnitaryMatrix::new(unsafe { read_matrix(dim, unitary_re, unitary_im) }) {
            Ok(u) => u,
            Err(e) => return fail_error(&e),
        };
        let projector = match Projector::new(unsafe { read_matrix(dim, projector_re, projector_im) }) {
            Ok(p) => p,
            Err(e) => return fail_error(&e),
        };
        match heisenberg_weight(&state, &evolution, &projector) {
            Ok(w) => {
                unsafe { *out_weight = w };
                PrStatus::Ok
            }
            Err(e) => fail_error(&e),
        }
    })
}

/// Existence verdict for a linear-scale weight in [0, 1].
///
/// # Safety
/// `rule` must be a live rule handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pr_exists(
    rule: *const PrRule,
    weight: f64,
    out: *mut PrVerdict,
) -> PrStatus {
    guarded(|| {
        require_non_null!(rule, out);
        match exists(weight, unsafe { &(*rule).inner }) {
            Ok(v) => {
                unsafe {
                    *out = PrVerdict {
                        exists: v.exists,
                        weight: v.weight,
                        log_weight: v.log_weight,
                        indistinguishable_from_zero: v.indistinguishable_from_zero,
                    }
                };
                PrStatus::Ok
            }
            Err(e) => fail_error(&e),
        }
    })
}

/// Existence verdict for a log-scale weight (must be <= 0; -inf means
/// weight 0). Use this form when the weight underflows a double.
///
/// # Safety
/// `rule` must be a live rule handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pr_exists_log(
    rule: *const PrRule,
    log_weight: f64,
    out: *mut PrVerdict,
) -> PrStatus {
    guarded(|| {
        require_non_null!(rule, out);
        match exists_log(log_weight, unsafe { &(*rule).inner }) {
            Ok(v) => {
                unsafe {
                    *out = PrVerdict {
                        exists: v.exists,
                        weight: v.weight,
                        log_weight: v.log_weight,
                        indistinguishable_from_zero: v.indistinguishable_from_zero,
                    }
                };
                PrStatus::Ok
            }
            Err(e) => fail_error(&e),
        }
    })
}

/// Natural log of the weight of the count-k branch class after n repeated
/// measurements with single-outcome weight p:
/// ln C(n, k) + k ln p + (n - k) ln(1 - p). Exact -inf when p is 0 or 1
/// and the class is off the certain sequence.
///
/// # Safety
/// `out_log_weight` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pr_branch_log_weight(
    n: u64,
    k: u64,
    p: f64,
    out_log_weight: *mut f64,
) -> PrStatus {
    guarded(|| {
        require_non_null!(out_log_weight);
        match preclusion::branch_log_weight(n, k, p) {
            Ok(lw) => {
                unsafe { *out_log_weight = lw };
                PrStatus::Ok
            }
            Err(e) => fail_error(&e),
        }
    })
}

// ---------------------------------------------------------------------------
// Ensembles
// ---------------------------------------------------------------------------

/// Opaque ensemble of the n+1 count-classes produced by n repeated
/// two-outcome measurements. Create with `pr_ensemble_new` /
/// `pr_ensemble_new_amplitudes`, release with `pr_ensemble_free`.
pub struct PrEnsemble {
    prep: QubitPreparation,
    inner: BranchEnsemble,
}

/// Build the branch ensemble for n repetitions of a measurement whose
/// outcome-1 weight is `p` (0 <= p <= 1).
///
/// # Safety
/// `out` must be a valid pointer to a `PrEnsemble*`.
#[no_mangle]
pub unsafe extern "C" fn pr_ensemble_new(
    p: f64,
    n: u64,
    out: *mut *mut PrEnsemble,
) -> PrStatus {
    guarded(|| {
        require_non_null!(out);
        let prep = match QubitPreparation::from_born_probability(p) {
            Ok(prep) => prep,
            Err(e) => return fail_error(&e),
        };
        match build_ensemble(&prep, n) {
            Ok(ensemble) => {
                let boxed = Box::new(PrEnsemble { prep, inner: ensemble });
                unsafe { *out = Box::into_raw(boxed) };
                PrStatus::Ok
            }
            Err(e) => fail_error(&e),
        }
    })
}

/// Build the branch ensemble from the preparation c1|1> + c2|2>
/// (|c1|^2 + |c2|^2 = 1 within 1e-12).
///
/// # Safety
/// `out` must be a valid pointer to a `PrEnsemble*`.
#[no_mangle]
pub unsafe extern "C" fn pr_ensemble_new_amplitudes(
    c1_re: f64,
    c1_im: f64,
    c2_re: f64,
    c2_im: f64,
    n: u64,
    out: *mut *mut PrEnsemble,
) -> PrStatus {
    guarded(|| {
        require_non_null!(out);
        let prep = match QubitPreparation::new(
            Complex64::new(c1_re, c1_im),
            Complex64::new(c2_re, c2_im),
        ) {
            Ok(prep) => prep,
            Err(e) => return fail_error(&e),
        };
        match build_ensemble(&prep, n) {
            Ok(ensemble) => {
                let boxed = Box::new(PrEnsemble { prep, inner: ensemble });
                unsafe { *out = Box::into_raw(boxed) };
                PrStatus::Ok
            }
            Err(e) => fail_error(&e),
        }
    })
}

/// Release an ensemble handle. NULL is accepted and ignored.
///
/// # Safety
/// `ensemble` must be NULL or a handle from a `pr_ensemble_new*` call that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn pr_ensemble_free(ensemble: *mut PrEnsemble) {
    if !ensemble.is_null() {
        drop(unsafe { Box::from_raw(ensemble) });
    }
}

/// Number of count-classes in the ensemble (always n + 1).
///
/// # Safety
/// `ensemble` must be a live ensemble handle; `out_len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pr_ensemble_len(
    ensemble: *const PrEnsemble,
    out_len: *mut usize,
) -> PrStatus {
    guarded(|| {
        require_non_null!(ensemble, out_len);
        unsafe { *out_len = (*ensemble).inner.log_weights().len() };
        PrStatus::Ok
    })
}

/// Outcome-1 weight p of the preparation behind the ensemble.
///
/// # Safety
/// `ensemble` must be a live ensemble handle; `out_p` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pr_ensemble_born_probability(
    ensemble: *const PrEnsemble,
    out_p: *mut f64,
) -> PrStatus {
    guarded(|| {
        require_non_null!(ensemble, out_p);
        unsafe { *out_p = (*ensemble).prep.born_probability() };
        PrStatus::Ok
    })
}

/// Copy the n+1 log-weights (index = count k) into `buf`. `buf_len` must be
/// at least n + 1; `PR_STATUS_BUFFER_TOO_SMALL` otherwise.
///
/// # Safety
/// `ensemble` must be a live ensemble handle; `buf` must reference writable
/// memory for `buf_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn pr_ensemble_log_weights(
    ensemble: *const PrEnsemble,
    buf: *mut f64,
    buf_len: usize,
) -> PrStatus {
    guarded(|| {
        require_non_null!(ensemble, buf);
        let weights = unsafe { (*ensemble).inner.log_weights() };
        if buf_len < weights.len() {
            return fail(
                PrStatus::BufferTooSmall,
                &format!("need {} entries, buffer holds {buf_len}", weights.len()),
            );
        }
        unsafe { std::ptr::copy_nonoverlapping(weights.as_ptr(), buf, weights.len()) };
        PrStatus::Ok
    })
}

// ---------------------------------------------------------------------------
// Survivors and thresholds
// ---------------------------------------------------------------------------

/// Fixed-size part of a survivor report.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PrSurvivorSummary {
    /// Number of repetitions the report describes.
    pub n: u64,
    /// Number of frequency bins.
    pub bins: u64,
    /// How many bins survive the rule.
    pub survivor_count: u64,
    /// How many bins are Born bins (2 when the Born weight sits on an
    /// interior bin edge, else 1).
    pub born_count: u64,
    /// 1 iff survivors are nonempty and every survivor is a Born bin.
    pub is_theorem_state: bool,
    /// 1 iff the Born weight sits on an interior bin edge.
    pub born_on_boundary: bool,
}

/// Survivor report for the ensemble's preparation at the ensemble's n,
/// with `bins` equal-width frequency bins under `rule`.
///
/// The fixed-size summary is written to `out_summary`. When
/// `surviving_bins` is non-NULL, up to `surviving_len` surviving bin
/// indices (ascending) are also copied there;
/// `PR_STATUS_BUFFER_TOO_SMALL` is returned if not all fit (a buffer of
/// `bins` entries always suffices). Pass NULL and 0 to skip the copy.
///
/// # Safety
/// `ensemble` and `rule` must be live handles; `out_summary` must be a
/// valid pointer; when non-NULL, `surviving_bins` must reference writable
/// memory for `surviving_len` entries.
#[no_mangle]
pub unsafe extern "C" fn pr_survivor_report(
    ensemble: *const PrEnsemble,
    bins: u64,
    rule: *const PrRule,
    out_summary: *mut PrSurvivorSummary,
    surviving_bins: *mut u64,
    surviving_len: usize,
) -> PrStatus {
    guarded(|| {
        require_non_null!(ensemble, rule, out_summary);
        let binning = match FrequencyBinning::new(bins) {
            Ok(b) => b,
            Err(e) => return fail_error(&e),
        };
        let (prep, n) = unsafe { (&(*ensemble).prep, (*ensemble).inner.n()) };
        let report = match survivor_report(prep, n, &binning, unsafe { &(*rule).inner }) {
            Ok(r) => r,
            Err(e) => return fail_error(&e),
        };
        if !surviving_bins.is_null() {
            if surviving_len < report.surviving_bins.len() {
                return fail(
                    PrStatus::BufferTooSmall,
                    &format!(
                        "need {} entries, buffer holds {surviving_len}",
                        report.surviving_bins.len()
                    ),
                );
            }
            for (i, &j) in report.surviving_bins.iter().enumerate() {
                unsafe { *surviving_bins.add(i) = j as u64 };
            }
        }
        unsafe {
            *out_summary = PrSurvivorSummary {
                n,
                bins,
                survivor_count: report.surviving_bins.len() as u64,
                born_count: report.born_bins.len() as u64,
                is_theorem_state: report.is_theorem_state,
                born_on_boundary: report.born_bins.len() > 1,
            }
        };
        PrStatus::Ok
    })
}

/// Result of a threshold search.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PrThresholdSummary {
    /// 1 iff a stable threshold was found within n_max.
    pub found: bool,
    /// The threshold n_b; meaningful only when `found` is 1.
    pub n_b: u64,
    /// 1 iff the Born weight sits on an interior bin edge (two Born bins).
    pub born_on_boundary: bool,
    /// Largest repetition count the scan examined.
    pub scanned_up_to: u64,
}

/// Find the smallest repetition count n_b at which only Born bins survive
/// the positive rule, demanding stability for `window` further counts.
/// Searches n = 1..=n_max. "Not found within n_max" is a successful call
/// with `found` = 0; a Born weight whose bins never survive anywhere in
/// the scanned range is `PR_STATUS_COMPUTATIONAL`.
///
/// `parallel` distributes the scan across threads; results are identical
/// either way.
///
/// # Safety
/// `rule` must be a live handle holding a positive rule; `out` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pr_find_nb(
    p: f64,
    bins: u64,
    rule: *const PrRule,
    n_max: u64,
    window: u64,
    parallel: bool,
    out: *mut PrThresholdSummary,
) -> PrStatus {
    guarded(|| {
        require_non_null!(rule, out);
        let prep = match QubitPreparation::from_born_probability(p) {
            Ok(prep) => prep,
            Err(e) => return fail_error(&e),
        };
        let binning = match FrequencyBinning::new(bins) {
            Ok(b) => b,
            Err(e) => return fail_error(&e),
        };
        match find_nb(&prep, &binning, unsafe { &(*rule).inner }, n_max, window, parallel) {
            Ok(result) => {
                unsafe {
                    *out = PrThresholdSummary {
                        found: result.n_b.is_some(),
                        n_b: result.n_b.unwrap_or(0),
                        born_on_boundary: result.born_on_boundary,
                        scanned_up_to: result.scan_log.last().map(|e| e.n).unwrap_or(0),
                    }
                };
                PrStatus::Ok
            }
            Err(e) => fail_error(&e),
        }
    })
}

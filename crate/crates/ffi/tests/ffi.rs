//! Exercises the C ABI exactly as a C caller would: through the exported
//! extern "C" functions, raw pointers, and status codes.

use std::ffi::CStr;
use std::ptr;

use preclusion_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(pr_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn make_rule(build: impl FnOnce(*mut *mut PrRule) -> PrStatus) -> *mut PrRule {
    let mut rule: *mut PrRule = ptr::null_mut();
    assert_eq!(build(&mut rule), PrStatus::Ok);
    assert!(!rule.is_null());
    rule
}

#[test]
fn version_is_a_nonempty_c_string() {
    let ptr = pr_version();
    assert!(!ptr.is_null());
    let text = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap();
    assert!(!text.is_empty());
    assert!(text.chars().next().unwrap().is_ascii_digit());
}

#[test]
fn status_messages_are_static_ascii() {
    for status in [
        PrStatus::Ok,
        PrStatus::NullPointer,
        PrStatus::InvalidArgument,
        PrStatus::Computational,
        PrStatus::BufferTooSmall,
        PrStatus::Internal,
    ] {
        let text = unsafe { CStr::from_ptr(pr_status_message(status)) }
            .to_str()
            .unwrap();
        assert!(!text.is_empty());
        assert!(text.is_ascii());
    }
}

#[test]
fn rule_lifecycle_and_classification() {
    let zero = make_rule(|out| unsafe { pr_rule_zero(out) });
    let positive = make_rule(|out| unsafe { pr_rule_positive(1e-3, out) });
    let tiny = make_rule(|out| unsafe { pr_rule_positive_log10(-400.0, out) });

    let mut flag = false;
    assert_eq!(unsafe { pr_rule_is_positive(zero, &mut flag) }, PrStatus::Ok);
    assert!(!flag);
    assert_eq!(unsafe { pr_rule_is_positive(positive, &mut flag) }, PrStatus::Ok);
    assert!(flag);
    assert_eq!(unsafe { pr_rule_is_positive(tiny, &mut flag) }, PrStatus::Ok);
    assert!(flag);

    unsafe {
        pr_rule_free(zero);
        pr_rule_free(positive);
        pr_rule_free(tiny);
        pr_rule_free(ptr::null_mut()); // NULL is accepted and ignored
    }
}

#[test]
fn invalid_eps_is_rejected_with_detail() {
    let mut rule: *mut PrRule = ptr::null_mut();
    for eps in [0.0, 1.0, -0.5, 2.0, f64::NAN] {
        assert_eq!(
            unsafe { pr_rule_positive(eps, &mut rule) },
            PrStatus::InvalidArgument,
            "eps = {eps}",
        );
        assert!(rule.is_null());
        assert!(last_error().contains("eps"));
    }
}

#[test]
fn weight_of_projector_onto_first_basis_state() {
    // |psi> = 0.6|1> + 0.8|2>, P = |1><1| -> weight 0.36 exactly.
    let state_re = [0.6, 0.8];
    let state_im = [0.0, 0.0];
    let proj_re = [1.0, 0.0, 0.0, 0.0];
    let proj_im = [0.0; 4];
    let mut w = f64::NAN;
    let status = unsafe {
        pr_weight(
            2,
            state_re.as_ptr(),
            state_im.as_ptr(),
            proj_re.as_ptr(),
            proj_im.as_ptr(),
            &mut w,
        )
    };
    assert_eq!(status, PrStatus::Ok);
    assert_eq!(w, 0.36);
}

#[test]
fn non_idempotent_matrix_is_rejected() {
    let state_re = [0.6, 0.8];
    let state_im = [0.0, 0.0];
    let proj_re = [0.5, 0.0, 0.0, 0.2]; // diagonal but not idempotent
    let proj_im = [0.0; 4];
    let mut w = f64::NAN;
    let status = unsafe {
        pr_weight(
            2,
            state_re.as_ptr(),
            state_im.as_ptr(),
            proj_re.as_ptr(),
            proj_im.as_ptr(),
            &mut w,
        )
    };
    assert_eq!(status, PrStatus::InvalidArgument);
    assert!(w.is_nan(), "out-parameter must be untouched on failure");
    assert!(last_error().contains("idempotent"));
}

#[test]
fn heisenberg_picture_agrees_with_direct_weight() {
    // Real rotation by 0.3 rad applied to |1>, then P = |1><1| on the
    // evolved state, computed both ways.
    let theta: f64 = 0.3;
    let (s, c) = theta.sin_cos();
    let initial_re = [1.0, 0.0];
    let initial_im = [0.0, 0.0];
    let u_re = [c, -s, s, c];
    let u_im = [0.0; 4];
    let proj_re = [1.0, 0.0, 0.0, 0.0];
    let proj_im = [0.0; 4];

    let mut via_heisenberg = f64::NAN;
    let status = unsafe {
        pr_heisenberg_weight(
            2,
            initial_re.as_ptr(),
            initial_im.as_ptr(),
            u_re.as_ptr(),
            u_im.as_ptr(),
            proj_re.as_ptr(),
            proj_im.as_ptr(),
            &mut via_heisenberg,
        )
    };
    assert_eq!(status, PrStatus::Ok);

    let evolved_re = [c, s];
    let evolved_im = [0.0, 0.0];
    let mut direct = f64::NAN;
    let status = unsafe {
        pr_weight(
            2,
            evolved_re.as_ptr(),
            evolved_im.as_ptr(),
            proj_re.as_ptr(),
            proj_im.as_ptr(),
            &mut direct,
        )
    };
    assert_eq!(status, PrStatus::Ok);
    assert!((via_heisenberg - direct).abs() <= 1e-12);
    assert!((direct - c * c).abs() <= 1e-12);
}

#[test]
fn exists_and_exists_log_verdicts() {
    let rule = make_rule(|out| unsafe { pr_rule_positive(1e-3, out) });
    let mut v = PrVerdict {
        exists: false,
        weight: 0.0,
        log_weight: 0.0,
        indistinguishable_from_zero: false,
    };

    assert_eq!(unsafe { pr_exists(rule, 0.5, &mut v) }, PrStatus::Ok);
    assert!(v.exists);
    assert_eq!(v.weight, 0.5);

    // The boundary is inclusive: weight == eps is precluded.
    assert_eq!(unsafe { pr_exists(rule, 1e-3, &mut v) }, PrStatus::Ok);
    assert!(!v.exists);

    // Log form handles weights far below double underflow.
    assert_eq!(unsafe { pr_exists_log(rule, -2000.0, &mut v) }, PrStatus::Ok);
    assert!(!v.exists);
    assert!(v.indistinguishable_from_zero);
    assert_eq!(v.log_weight, -2000.0);

    // Under a log10(eps) = -400 rule, log-weight -800 still exists
    // (ln(1e-400) ~ -921) even though its linear weight underflows.
    let tiny = make_rule(|out| unsafe { pr_rule_positive_log10(-400.0, out) });
    assert_eq!(unsafe { pr_exists_log(tiny, -800.0, &mut v) }, PrStatus::Ok);
    assert!(v.exists);
    assert!(v.indistinguishable_from_zero);

    unsafe {
        pr_rule_free(rule);
        pr_rule_free(tiny);
    }
}

#[test]
fn branch_log_weight_matches_closed_form() {
    let mut lw = f64::NAN;
    // n = 4, k = 2, p = 0.5: C(4,2)/16 = 0.375.
    assert_eq!(
        unsafe { pr_branch_log_weight(4, 2, 0.5, &mut lw) },
        PrStatus::Ok
    );
    assert!((lw - (0.375f64).ln()).abs() <= 1e-12);

    // k out of range is a validation error.
    assert_eq!(
        unsafe { pr_branch_log_weight(4, 5, 0.5, &mut lw) },
        PrStatus::InvalidArgument
    );
}

#[test]
fn ensemble_roundtrip_and_buffer_contract() {
    let mut ensemble: *mut PrEnsemble = ptr::null_mut();
    assert_eq!(
        unsafe { pr_ensemble_new(0.5, 4, &mut ensemble) },
        PrStatus::Ok
    );

    let mut len = 0usize;
    assert_eq!(unsafe { pr_ensemble_len(ensemble, &mut len) }, PrStatus::Ok);
    assert_eq!(len, 5);

    let mut p = f64::NAN;
    assert_eq!(
        unsafe { pr_ensemble_born_probability(ensemble, &mut p) },
        PrStatus::Ok
    );
    assert_eq!(p, 0.5);

    let mut too_small = [0.0f64; 4];
    assert_eq!(
        unsafe { pr_ensemble_log_weights(ensemble, too_small.as_mut_ptr(), too_small.len()) },
        PrStatus::BufferTooSmall
    );
    assert!(last_error().contains("5"));

    let mut buf = [f64::NAN; 5];
    assert_eq!(
        unsafe { pr_ensemble_log_weights(ensemble, buf.as_mut_ptr(), buf.len()) },
        PrStatus::Ok
    );
    let expected = [1.0f64 / 16.0, 4.0 / 16.0, 6.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0];
    for (k, (&got, &want)) in buf.iter().zip(&expected).enumerate() {
        assert!(
            (got - want.ln()).abs() <= 1e-12,
            "k = {k}: {got} vs {}",
            want.ln()
        );
    }

    unsafe { pr_ensemble_free(ensemble) };
    unsafe { pr_ensemble_free(ptr::null_mut()) };
}

#[test]
fn survivor_report_with_and_without_buffer() {
    let mut ensemble: *mut PrEnsemble = ptr::null_mut();
    assert_eq!(
        unsafe { pr_ensemble_new(0.5, 100, &mut ensemble) },
        PrStatus::Ok
    );
    let rule = make_rule(|out| unsafe { pr_rule_positive(1e-3, out) });

    let mut summary = PrSurvivorSummary {
        n: 0,
        bins: 0,
        survivor_count: 0,
        born_count: 0,
        is_theorem_state: false,
        born_on_boundary: false,
    };
    // Counts only, no buffer.
    assert_eq!(
        unsafe { pr_survivor_report(ensemble, 5, rule, &mut summary, ptr::null_mut(), 0) },
        PrStatus::Ok
    );
    assert_eq!(summary.n, 100);
    assert_eq!(summary.bins, 5);
    assert_eq!(summary.born_count, 1);
    assert!(!summary.born_on_boundary);
    assert!(summary.survivor_count >= 1);

    // Second call with a full-size buffer: the Born bin of p = 0.5 with
    // m = 5 is bin 2 and must be among the survivors.
    let mut surviving = [u64::MAX; 5];
    assert_eq!(
        unsafe {
            pr_survivor_report(
                ensemble,
                5,
                rule,
                &mut summary,
                surviving.as_mut_ptr(),
                surviving.len(),
            )
        },
        PrStatus::Ok
    );
    let filled = &surviving[..summary.survivor_count as usize];
    assert!(filled.contains(&2));
    assert!(filled.windows(2).all(|w| w[0] < w[1]), "ascending order");

    // Undersized buffer is reported, not overrun.
    let mut one = [0u64; 1];
    if summary.survivor_count > 1 {
        assert_eq!(
            unsafe {
                pr_survivor_report(ensemble, 5, rule, &mut summary, one.as_mut_ptr(), one.len())
            },
            PrStatus::BufferTooSmall
        );
    }

    unsafe {
        pr_rule_free(rule);
        pr_ensemble_free(ensemble);
    }
}

#[test]
fn find_nb_found_not_found_and_persistent() {
    let rule = make_rule(|out| unsafe { pr_rule_positive(1e-3, out) });
    let mut summary = PrThresholdSummary {
        found: false,
        n_b: 0,
        born_on_boundary: false,
        scanned_up_to: 0,
    };

    // p = 0.5, m = 5: the threshold sits at 246 (stable for 32 further
    // counts), matching the library's own frozen value.
    assert_eq!(
        unsafe { pr_find_nb(0.5, 5, rule, 1000, 32, false, &mut summary) },
        PrStatus::Ok
    );
    assert!(summary.found);
    assert_eq!(summary.n_b, 246);
    assert!(!summary.born_on_boundary);
    assert_eq!(summary.scanned_up_to, 278);

    // Same configuration, parallel scan: identical summary.
    let mut parallel = summary;
    parallel.n_b = 0;
    assert_eq!(
        unsafe { pr_find_nb(0.5, 5, rule, 1000, 32, true, &mut parallel) },
        PrStatus::Ok
    );
    assert_eq!(parallel.n_b, summary.n_b);
    assert_eq!(parallel.scanned_up_to, summary.scanned_up_to);

    // Threshold too small to ever trim the off-Born bins within n_max.
    let strict = make_rule(|out| unsafe { pr_rule_positive_log10(-400.0, out) });
    assert_eq!(
        unsafe { pr_find_nb(0.5, 5, strict, 50, 5, false, &mut summary) },
        PrStatus::Ok
    );
    assert!(!summary.found);
    assert_eq!(summary.scanned_up_to, 55);

    // eps so large every bin is always precluded: terminal outcome.
    let smother = make_rule(|out| unsafe { pr_rule_positive(0.999, out) });
    assert_eq!(
        unsafe { pr_find_nb(0.5, 2, smother, 50, 5, false, &mut summary) },
        PrStatus::Computational
    );
    assert!(!last_error().is_empty());

    // The zero rule cannot drive a threshold search.
    let zero = make_rule(|out| unsafe { pr_rule_zero(out) });
    assert_eq!(
        unsafe { pr_find_nb(0.5, 5, zero, 50, 5, false, &mut summary) },
        PrStatus::InvalidArgument
    );

    unsafe {
        pr_rule_free(rule);
        pr_rule_free(strict);
        pr_rule_free(smother);
        pr_rule_free(zero);
    }
}

#[test]
fn null_pointers_are_reported_not_dereferenced() {
    let mut w = 0.0f64;
    let state = [1.0, 0.0];
    let zeros = [0.0, 0.0];
    let proj_re = [1.0, 0.0, 0.0, 0.0];
    let proj_im = [0.0; 4];

    assert_eq!(
        unsafe { pr_weight(2, ptr::null(), zeros.as_ptr(), proj_re.as_ptr(), proj_im.as_ptr(), &mut w) },
        PrStatus::NullPointer
    );
    assert_eq!(
        unsafe { pr_weight(2, state.as_ptr(), zeros.as_ptr(), proj_re.as_ptr(), proj_im.as_ptr(), ptr::null_mut()) },
        PrStatus::NullPointer
    );
    assert_eq!(unsafe { pr_rule_zero(ptr::null_mut()) }, PrStatus::NullPointer);

    let mut v = PrVerdict {
        exists: false,
        weight: 0.0,
        log_weight: 0.0,
        indistinguishable_from_zero: false,
    };
    assert_eq!(unsafe { pr_exists(ptr::null(), 0.5, &mut v) }, PrStatus::NullPointer);
    assert!(last_error().contains("NULL"));
}

#[test]
fn generated_header_declares_the_full_surface() {
    let header = include_str!("../include/preclusion.h");
    for symbol in [
        "PR_STATUS_OK",
        "PR_STATUS_NULL_POINTER",
        "PR_STATUS_INVALID_ARGUMENT",
        "PR_STATUS_COMPUTATIONAL",
        "PR_STATUS_BUFFER_TOO_SMALL",
        "PR_STATUS_INTERNAL",
        "typedef struct PrEnsemble PrEnsemble",
        "typedef struct PrRule PrRule",
        "PrVerdict",
        "PrSurvivorSummary",
        "PrThresholdSummary",
        "pr_version",
        "pr_status_message",
        "pr_last_error_message",
        "pr_rule_zero",
        "pr_rule_positive",
        "pr_rule_positive_log10",
        "pr_rule_is_positive",
        "pr_rule_free",
        "pr_weight",
        "pr_heisenberg_weight",
        "pr_exists",
        "pr_exists_log",
        "pr_branch_log_weight",
        "pr_ensemble_new",
        "pr_ensemble_new_amplitudes",
        "pr_ensemble_free",
        "pr_ensemble_len",
        "pr_ensemble_born_probability",
        "pr_ensemble_log_weights",
        "pr_survivor_report",
        "pr_find_nb",
    ] {
        assert!(header.contains(symbol), "header is missing `{symbol}`");
    }
}

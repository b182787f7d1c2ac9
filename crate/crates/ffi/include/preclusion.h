/* C ABI for the preclusion library.
 *
 * Every fallible function returns a PrStatus and writes its results through
 * out-pointers; out-parameters are written only on PR_STATUS_OK. Handles
 * are opaque: create with the matching constructor, release with the
 * matching *_free. pr_last_error_message() carries the detail of the most
 * recent failure on the calling thread. */

#ifndef PRECLUSION_H
#define PRECLUSION_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call in this ABI.
typedef enum PrStatus {
  // The call succeeded and all out-parameters were written.
  PR_STATUS_OK = 0,
  // A required pointer argument was NULL.
  PR_STATUS_NULL_POINTER = 1,
  // An argument violated a documented invariant (normalization,
  // projector axioms, ranges, dimension agreement, ...).
  PR_STATUS_INVALID_ARGUMENT = 2,
  // The computation itself reported a terminal outcome: every branch is
  // precluded, persistently, under the active rule.
  PR_STATUS_COMPUTATIONAL = 3,
  // A caller-provided buffer is too short for the requested data.
  PR_STATUS_BUFFER_TOO_SMALL = 4,
  // An internal invariant failed; the library state is unharmed but the
  // call produced nothing. Please report the message.
  PR_STATUS_INTERNAL = 5,
} PrStatus;

// Opaque ensemble of the n+1 count-classes produced by n repeated
// two-outcome measurements. Create with `pr_ensemble_new` /
// `pr_ensemble_new_amplitudes`, release with `pr_ensemble_free`.
typedef struct PrEnsemble PrEnsemble;

// Opaque existence rule. Create with `pr_rule_zero` /
// `pr_rule_positive` / `pr_rule_positive_log10`, release with
// `pr_rule_free`.
typedef struct PrRule PrRule;

// Existence verdict for one weight under one rule.
typedef struct PrVerdict {
  // 1 if the branch exists under the rule, 0 if it is precluded.
  bool exists;
  // The weight, in linear scale (may underflow to 0 for log input).
  double weight;
  // The weight's natural logarithm (-inf for weight 0).
  double log_weight;
  // 1 if the weight is exactly 0 or small enough to be numerically
  // indistinguishable from 0 in linear scale.
  bool indistinguishable_from_zero;
} PrVerdict;

// Fixed-size part of a survivor report.
typedef struct PrSurvivorSummary {
  // Number of repetitions the report describes.
  uint64_t n;
  // Number of frequency bins.
  uint64_t bins;
  // How many bins survive the rule.
  uint64_t survivor_count;
  // How many bins are Born bins (2 when the Born weight sits on an
  // interior bin edge, else 1).
  uint64_t born_count;
  // 1 iff survivors are nonempty and every survivor is a Born bin.
  bool is_theorem_state;
  // 1 iff the Born weight sits on an interior bin edge.
  bool born_on_boundary;
} PrSurvivorSummary;

// Result of a threshold search.
typedef struct PrThresholdSummary {
  // 1 iff a stable threshold was found within n_max.
  bool found;
  // The threshold n_b; meaningful only when `found` is 1.
  uint64_t n_b;
  // 1 iff the Born weight sits on an interior bin edge (two Born bins).
  bool born_on_boundary;
  // Largest repetition count the scan examined.
  uint64_t scanned_up_to;
} PrThresholdSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, e.g. "0.1.0". Static storage; do not free.
const char *pr_version(void);

// Static, one-line description of a status code. Do not free.
const char *pr_status_message(enum PrStatus status);

// Detailed message of the most recent failing call **on this thread**.
// Valid until the next failing call on the same thread; empty string when
// nothing failed yet. Do not free.
const char *pr_last_error_message(void);

// Create the zero rule: a branch exists iff its weight is nonzero.
//
// # Safety
// `out` must be a valid pointer to a `PrRule*`.
enum PrStatus pr_rule_zero(struct PrRule **out);

// Create a positive rule with threshold `eps` (0 < eps < 1): a branch is
// precluded iff its weight is <= eps (boundary inclusive).
//
// # Safety
// `out` must be a valid pointer to a `PrRule*`.
enum PrStatus pr_rule_positive(double eps, struct PrRule **out);

// Create a positive rule from log10(eps), for thresholds too small to
// represent as a double (for example log10_eps = -400).
//
// # Safety
// `out` must be a valid pointer to a `PrRule*`.
enum PrStatus pr_rule_positive_log10(double log10_eps, struct PrRule **out);

// Whether the rule is a positive rule (writes 1) or the zero rule (0).
//
// # Safety
// `rule` must be a live handle from a `pr_rule_*` constructor; `out` must
// be a valid pointer.
enum PrStatus pr_rule_is_positive(const struct PrRule *rule, bool *out);

// Release a rule handle. NULL is accepted and ignored.
//
// # Safety
// `rule` must be NULL or a handle from a `pr_rule_*` constructor that has
// not been freed yet.
void pr_rule_free(struct PrRule *rule);

// Weight of the outcome `projector` on `state`: the Born weight
// <state | P | state>. The state must be normalized and the projector
// Hermitian and idempotent (both within 1e-12).
//
// `state_re`/`state_im` hold `dim` entries; `projector_re`/`projector_im`
// hold `dim * dim` entries in row-major order.
//
// # Safety
// All array pointers must reference readable memory of the stated length,
// and `out_weight` must be a valid pointer.
enum PrStatus pr_weight(size_t dim,
                        const double *state_re,
                        const double *state_im,
                        const double *projector_re,
                        const double *projector_im,
                        double *out_weight);

// The same weight computed in the Heisenberg picture: the projector is
// conjugated by the unitary `evolution` and evaluated in the *initial*
// state. Agrees with `pr_weight` applied to the evolved state.
//
// # Safety
// As for `pr_weight`; `unitary_re`/`unitary_im` hold `dim * dim` row-major
// entries of a matrix that is unitary within 1e-12.
enum PrStatus pr_heisenberg_weight(size_t dim,
                                   const double *state_re,
                                   const double *state_im,
                                   const double *unitary_re,
                                   const double *unitary_im,
                                   const double *projector_re,
                                   const double *projector_im,
                                   double *out_weight);

// Existence verdict for a linear-scale weight in [0, 1].
//
// # Safety
// `rule` must be a live rule handle; `out` must be a valid pointer.
enum PrStatus pr_exists(const struct PrRule *rule, double weight, struct PrVerdict *out);

// Existence verdict for a log-scale weight (must be <= 0; -inf means
// weight 0). Use this form when the weight underflows a double.
//
// # Safety
// `rule` must be a live rule handle; `out` must be a valid pointer.
enum PrStatus pr_exists_log(const struct PrRule *rule, double log_weight, struct PrVerdict *out);

// Natural log of the weight of the count-k branch class after n repeated
// measurements with single-outcome weight p:
// ln C(n, k) + k ln p + (n - k) ln(1 - p). Exact -inf when p is 0 or 1
// and the class is off the certain sequence.
//
// # Safety
// `out_log_weight` must be a valid pointer.
enum PrStatus pr_branch_log_weight(uint64_t n, uint64_t k, double p, double *out_log_weight);

// Build the branch ensemble for n repetitions of a measurement whose
// outcome-1 weight is `p` (0 <= p <= 1).
//
// # Safety
// `out` must be a valid pointer to a `PrEnsemble*`.
enum PrStatus pr_ensemble_new(double p, uint64_t n, struct PrEnsemble **out);

// Build the branch ensemble from the preparation c1|1> + c2|2>
// (|c1|^2 + |c2|^2 = 1 within 1e-12).
//
// # Safety
// `out` must be a valid pointer to a `PrEnsemble*`.
enum PrStatus pr_ensemble_new_amplitudes(double c1_re,
                                         double c1_im,
                                         double c2_re,
                                         double c2_im,
                                         uint64_t n,
                                         struct PrEnsemble **out);

// Release an ensemble handle. NULL is accepted and ignored.
//
// # Safety
// `ensemble` must be NULL or a handle from a `pr_ensemble_new*` call that
// has not been freed yet.
void pr_ensemble_free(struct PrEnsemble *ensemble);

// Number of count-classes in the ensemble (always n + 1).
//
// # Safety
// `ensemble` must be a live ensemble handle; `out_len` must be valid.
enum PrStatus pr_ensemble_len(const struct PrEnsemble *ensemble, size_t *out_len);

// Outcome-1 weight p of the preparation behind the ensemble.
//
// # Safety
// `ensemble` must be a live ensemble handle; `out_p` must be valid.
enum PrStatus pr_ensemble_born_probability(const struct PrEnsemble *ensemble, double *out_p);

// Copy the n+1 log-weights (index = count k) into `buf`. `buf_len` must be
// at least n + 1; `PR_STATUS_BUFFER_TOO_SMALL` otherwise.
//
// # Safety
// `ensemble` must be a live ensemble handle; `buf` must reference writable
// memory for `buf_len` doubles.
enum PrStatus pr_ensemble_log_weights(const struct PrEnsemble *ensemble,
                                      double *buf,
                                      size_t buf_len);

// Survivor report for the ensemble's preparation at the ensemble's n,
// with `bins` equal-width frequency bins under `rule`.
//
// The fixed-size summary is written to `out_summary`. When
// `surviving_bins` is non-NULL, up to `surviving_len` surviving bin
// indices (ascending) are also copied there;
// `PR_STATUS_BUFFER_TOO_SMALL` is returned if not all fit (a buffer of
// `bins` entries always suffices). Pass NULL and 0 to skip the copy.
//
// # Safety
// `ensemble` and `rule` must be live handles; `out_summary` must be a
// valid pointer; when non-NULL, `surviving_bins` must reference writable
// memory for `surviving_len` entries.
enum PrStatus pr_survivor_report(const struct PrEnsemble *ensemble,
                                 uint64_t bins,
                                 const struct PrRule *rule,
                                 struct PrSurvivorSummary *out_summary,
                                 uint64_t *surviving_bins,
                                 size_t surviving_len);

// Find the smallest repetition count n_b at which only Born bins survive
// the positive rule, demanding stability for `window` further counts.
// Searches n = 1..=n_max. "Not found within n_max" is a successful call
// with `found` = 0; a Born weight whose bins never survive anywhere in
// the scanned range is `PR_STATUS_COMPUTATIONAL`.
//
// `parallel` distributes the scan across threads; results are identical
// either way.
//
// # Safety
// `rule` must be a live handle holding a positive rule; `out` must be a
// valid pointer.
enum PrStatus pr_find_nb(double p,
                         uint64_t bins,
                         const struct PrRule *rule,
                         uint64_t n_max,
                         uint64_t window,
                         bool parallel,
                         struct PrThresholdSummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PRECLUSION_H */

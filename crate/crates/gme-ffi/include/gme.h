/* C interface for the gme toolkit: states, invariant signals, and
 * the verification sweep. Generated by cbindgen; do not edit. */

#ifndef GME_H
#define GME_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call in this interface.
 */
typedef enum GmeStatus {
  /**
   * The call succeeded.
   */
  GME_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  GME_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  GME_STATUS_INVALID_UTF8 = 2,
  /**
   * An argument was structurally valid but semantically rejected.
   */
  GME_STATUS_INVALID_ARGUMENT = 3,
  /**
   * Text input could not be parsed.
   */
  GME_STATUS_PARSE_ERROR = 4,
  /**
   * Operand shapes or party counts do not line up.
   */
  GME_STATUS_DIMENSION_MISMATCH = 5,
  /**
   * A state vector was not normalized.
   */
  GME_STATUS_NOT_NORMALIZED = 6,
  /**
   * A numerical guarantee failed (for example a non-positive contraction
   * under a logarithm).
   */
  GME_STATUS_NUMERICAL_ERROR = 7,
  /**
   * An evaluation would exceed the configured term budget.
   */
  GME_STATUS_BUDGET_EXCEEDED = 8,
  /**
   * An exact integer computation overflowed.
   */
  GME_STATUS_OVERFLOW = 9,
  /**
   * File or stream input/output failed.
   */
  GME_STATUS_IO_ERROR = 10,
  /**
   * The library panicked; the process state is still sound but the call
   * did nothing.
   */
  GME_STATUS_PANIC = 11,
} GmeStatus;

/**
 * Opaque handle to an evaluable signal (either a partition-coefficient
 * vector over a seed family or a zero-sum-tensor contraction).
 */
typedef struct GmeSignal GmeSignal;

/**
 * Opaque handle to a dense multi-party pure state.
 */
typedef struct GmeState GmeState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the library, as a static NUL-terminated string. Do not free.
 */
const char *gme_version(void);

/**
 * Message of the most recent failure on this thread, or null if none has
 * occurred. Valid until the next failing call on the same thread; do not
 * free.
 */
const char *gme_last_error(void);

/**
 * Release a string previously handed out through a `char**` out parameter.
 *
 * # Safety
 * `text` must be null or a pointer obtained from this library and not yet
 * freed.
 */
void gme_string_free(char *text);

/**
 * Parse a state from its JSON form (party labels, local dimensions, and a
 * dense amplitude list).
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum GmeStatus gme_state_from_json(const char *text, struct GmeState **out);

/**
 * Construct a named catalog state with the requested party count and local
 * dimension (some names constrain these; see the library documentation).
 *
 * # Safety
 * `name` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum GmeStatus gme_state_catalog(const char *name,
                                 uintptr_t party_count,
                                 uintptr_t local_dim,
                                 struct GmeState **out);

/**
 * Serialize a state to its JSON form. The returned string is owned by the
 * caller; free it with [`gme_string_free`].
 *
 * # Safety
 * `state` must be a live handle and `out` a valid pointer.
 */
enum GmeStatus gme_state_to_json(const struct GmeState *state, char **out);

/**
 * Number of parties of a state.
 *
 * # Safety
 * `state` must be a live handle and `out` a valid pointer.
 */
enum GmeStatus gme_state_party_count(const struct GmeState *state, uintptr_t *out);

/**
 * Release a state handle.
 *
 * # Safety
 * `state` must be null or a live handle created by this library and not yet
 * freed.
 */
void gme_state_free(struct GmeState *state);

/**
 * Entropy of the reduced state on the parties selected by `subset_mask`
 * (bit `a` set keeps party `a`): order 1 gives the von Neumann entropy,
 * order `n >= 2` the order-`n` Rényi entropy.
 *
 * # Safety
 * `state` must be a live handle and `out` a valid pointer.
 */
enum GmeStatus gme_renyi_entropy(const struct GmeState *state,
                                 uint32_t subset_mask,
                                 uint32_t order,
                                 double *out);

/**
 * Parse a signal from its JSON form. Both layouts are accepted: a
 * partition-coefficient vector over a seed family, or a zero-sum tensor
 * over a permutation list.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum GmeStatus gme_signal_from_json(const char *text, struct GmeSignal **out);

/**
 * Build the inverted top vector of a seed family over `party_count`
 * parties. `family` uses the same grammar as the command-line tool, for
 * example `renyi:2`, `residual`, or `square(renyi:1)`.
 *
 * # Safety
 * `family` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum GmeStatus gme_signal_top_vector(const char *family,
                                     uintptr_t party_count,
                                     struct GmeSignal **out);

/**
 * Serialize a signal to its JSON form. The returned string is owned by the
 * caller; free it with [`gme_string_free`].
 *
 * # Safety
 * `signal` must be a live handle and `out` a valid pointer.
 */
enum GmeStatus gme_signal_to_json(const struct GmeSignal *signal, char **out);

/**
 * Evaluate a signal on a state.
 *
 * # Safety
 * `signal` and `state` must be live handles and `out` a valid pointer.
 */
enum GmeStatus gme_signal_evaluate(const struct GmeSignal *signal,
                                   const struct GmeState *state,
                                   double *out);

/**
 * Render the symbolic entropy expansion of a partition-coefficient signal,
 * optionally applying the pure-state reductions (complement folding and
 * dropping terms that vanish identically on pure states). Tensor-contraction
 * signals have no such expansion and are rejected.
 *
 * # Safety
 * `signal` must be a live handle and `out` a valid pointer.
 */
enum GmeStatus gme_signal_expansion(const struct GmeSignal *signal,
                                    bool reduce_on_purity,
                                    char **out);

/**
 * Release a signal handle.
 *
 * # Safety
 * `signal` must be null or a live handle created by this library and not
 * yet freed.
 */
void gme_signal_free(struct GmeSignal *signal);

/**
 * Run the full verification sweep and hand back its JSON report. The call
 * succeeds whenever the sweep runs to completion; inspect the report's
 * `pass` field for the verdict. Free the string with [`gme_string_free`].
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum GmeStatus gme_verify_run(uintptr_t q_max, uint64_t seed, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GME_H */

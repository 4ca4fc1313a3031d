#ifndef MELCERT_H
#define MELCERT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Status codes; the values match the `melcert` CLI exit codes where both exist.
 */
typedef enum MelcertStatus {
  MELCERT_STATUS_OK = 0,
  MELCERT_STATUS_FAILURE = 1,
  MELCERT_STATUS_UNSUPPORTED_DIMENSION = 2,
  MELCERT_STATUS_NOT_CERTIFIED = 3,
  MELCERT_STATUS_MALFORMED_INPUT = 4,
  MELCERT_STATUS_NO_CONVERGENCE = 5,
  MELCERT_STATUS_NULL_POINTER = 6,
  MELCERT_STATUS_PANIC = 7,
} MelcertStatus;

/**
 * How a unitary `U` defines its state: `(I ⊗ U)|ψ₁⟩`, `(I ⊗ U†)|ψ₁⟩`, or
 * both tried with the better result kept.
 */
typedef enum MelcertConvention {
  MELCERT_CONVENTION_U = 0,
  MELCERT_CONVENTION_DAGGER = 1,
  MELCERT_CONVENTION_BOTH = 2,
} MelcertConvention;

/**
 * A validated family of mutually orthogonal unitaries.
 */
typedef struct MelcertFamily MelcertFamily;

/**
 * The outcome of certifying a family.
 */
typedef struct MelcertReport MelcertReport;

/**
 * Summary of a primal solve.
 */
typedef struct MelcertSdpSummary {
  double primal_value;
  /**
   * Largest of the partition, PSD and PPT feasibility residuals.
   */
  double residual;
  size_t iterations;
  int32_t converged;
} MelcertSdpSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message recorded on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *melcert_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *melcert_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void melcert_string_free(char *s);

/**
 * Default family for dimension `d`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum MelcertStatus melcert_family_for_dimension(size_t d, struct MelcertFamily **out);

/**
 * Named family with optional parameters; zero means "not given". `family`
 * is one of `case-even`, `case-4n1`, `case-4n3`, `d7`, `d11`, `4n-tensor`,
 * `pauli`, and may be null to pick the default family for `d`.
 *
 * # Safety
 * `family` must be null or a NUL-terminated string; `out` must be valid.
 */
enum MelcertStatus melcert_family_build(const char *family,
                                        size_t d,
                                        size_t n,
                                        size_t count,
                                        struct MelcertFamily **out);

/**
 * Parses and validates a `melcert-unitaries-v1` document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid.
 */
enum MelcertStatus melcert_family_from_json(const char *json, struct MelcertFamily **out);

/**
 * Serializes a family as a `melcert-unitaries-v1` document.
 *
 * # Safety
 * `family` must be a live handle; `out` must be valid.
 */
enum MelcertStatus melcert_family_to_json(const struct MelcertFamily *family, char **out);

/**
 * Local dimension `d`, or 0 for a null handle.
 *
 * # Safety
 * `family` must be null or a live handle.
 */
size_t melcert_family_dimension(const struct MelcertFamily *family);

/**
 * Number of unitaries, or 0 for a null handle.
 *
 * # Safety
 * `family` must be null or a live handle.
 */
size_t melcert_family_len(const struct MelcertFamily *family);

/**
 * Copies unitary `index` into `buffer` as row-major interleaved
 * `re, im` pairs; `len` must be at least `2·d²`.
 *
 * # Safety
 * `family` must be a live handle and `buffer` must hold `len` doubles.
 */
enum MelcertStatus melcert_family_unitary(const struct MelcertFamily *family,
                                          size_t index,
                                          double *buffer,
                                          size_t len);

/**
 * Releases a family. Null is ignored.
 *
 * # Safety
 * `family` must come from this library and not have been freed.
 */
void melcert_family_free(struct MelcertFamily *family);

/**
 * Certifies a family. A report is written to `out` both when the family is
 * certified (`Ok`) and when it is not (`NotCertified`).
 *
 * # Safety
 * `family` must be a live handle; `out` must be valid.
 */
enum MelcertStatus melcert_certify(const struct MelcertFamily *family,
                                   double margin_tol,
                                   enum MelcertConvention convention,
                                   struct MelcertReport **out);

/**
 * 1 if certified, 0 otherwise (including null).
 *
 * # Safety
 * `report` must be null or a live handle.
 */
int32_t melcert_report_certified(const struct MelcertReport *report);

/**
 * Upper bound on the PPT discrimination probability; NaN for null.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double melcert_report_bound(const struct MelcertReport *report);

/**
 * Dimension of the common negative eigenspace for the reported convention.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
size_t melcert_report_intersection_dim(const struct MelcertReport *report);

/**
 * Number of margins, one per state.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
size_t melcert_report_margin_count(const struct MelcertReport *report);

/**
 * Copies the margins `λ_min(γ − T_A(ρ_j))` into `buffer`.
 *
 * # Safety
 * `report` must be a live handle and `buffer` must hold `len` doubles.
 */
enum MelcertStatus melcert_report_margins(const struct MelcertReport *report,
                                          double *buffer,
                                          size_t len);

/**
 * Serializes the report as a `melcert-report-v1` document.
 *
 * # Safety
 * `report` must be a live handle; `out` must be valid.
 */
enum MelcertStatus melcert_report_to_json(const struct MelcertReport *report, char **out);

/**
 * Releases a report. Null is ignored.
 *
 * # Safety
 * `report` must come from this library and not have been freed.
 */
void melcert_report_free(struct MelcertReport *report);

/**
 * Runs the primal solver. Zero `max_iterations` and non-positive
 * `step_size`/`stop_tolerance` select the defaults for `d`. Families with
 * `d > 8` are rejected unless `allow_large` is non-zero.
 *
 * # Safety
 * `family` must be a live handle; `out` must be valid.
 */
enum MelcertStatus melcert_sdp_solve(const struct MelcertFamily *family,
                                     enum MelcertConvention convention,
                                     size_t max_iterations,
                                     double step_size,
                                     double stop_tolerance,
                                     uint64_t seed,
                                     int32_t allow_large,
                                     struct MelcertSdpSummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MELCERT_H */

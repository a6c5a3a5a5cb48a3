#ifndef SUNADA_LAB_H
#define SUNADA_LAB_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result codes.
typedef enum SlStatus {
  // Success; for verdict-bearing calls, the verdict is positive.
  SL_OK = 0,
  // The call succeeded and the verdict is negative.
  SL_NEGATIVE = 1,
  // A null pointer, bad UTF-8 or an out-of-range argument.
  SL_INVALID_ARGUMENT = 2,
  SL_VALIDATION_FAILED = 3,
  SL_IO = 4,
  SL_PARSE = 5,
  SL_NOT_ALMOST_CONJUGATE = 6,
  SL_CAP_EXCEEDED = 7,
  // Any other library error.
  SL_FAILED = 8,
  SL_PANIC = 9,
} SlStatus;

// Finite permutation group.
typedef struct SlGroup SlGroup;

// Loaded and validated scenario.
typedef struct SlScenario SlScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library name and version; static, never freed.
const char *sl_version(void);

// Message for the last failed call on this thread, or an empty string.
// Valid until the next call into this library on the same thread.
const char *sl_last_error(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must be null or a pointer returned by this library and not yet freed.
void sl_string_free(char *s);

// Parses a group file (`{"name", "degree", "generators"}`) and enumerates
// the group.
//
// # Safety
// `json` must be a nul-terminated string; `out` must be writable.
enum SlStatus sl_group_from_json(const char *json, struct SlGroup **out);

// # Safety
// `g` must be a live handle; `out` must be writable.
enum SlStatus sl_group_order(const struct SlGroup *g, size_t *out);

// # Safety
// `g` must be null or a handle from [`sl_group_from_json`], not yet freed.
void sl_group_free(struct SlGroup *g);

// Almost-conjugacy of the subgroups generated by `h1_json` and `h2_json`
// (each a JSON array of image arrays). Returns `SlOk` when almost
// conjugate and `SlNegative` otherwise; `conjugate` may be null.
//
// # Safety
// Pointers must be valid; strings nul-terminated.
enum SlStatus sl_almost_conjugate(const struct SlGroup *g,
                                  const char *h1_json,
                                  const char *h2_json,
                                  bool *conjugate);

// Loads and validates a scenario file.
//
// # Safety
// `path` must be a nul-terminated string; `out` must be writable.
enum SlStatus sl_scenario_load(const char *path, struct SlScenario **out);

// # Safety
// `s` must be null or a handle from [`sl_scenario_load`], not yet freed.
void sl_scenario_free(struct SlScenario *s);

// Runs the full pipeline with `seed` and the scenario's k range and
// tolerance. The JSON report is written to `report_json` (free with
// [`sl_string_free`]). Returns `SlOk` or `SlNegative` by overall verdict.
//
// # Safety
// `s` must be a live handle; `report_json` must be writable.
enum SlStatus sl_scenario_run(const struct SlScenario *s, uint64_t seed, char **report_json);

// Largest per-k spectral gap between the two quotients for
// `k_lo ≤ k ≤ k_hi`. Returns `SlOk` when every gap is at most `tol`.
//
// # Safety
// `s` must be a live handle; `max_gap` must be writable.
enum SlStatus sl_scenario_compare(const struct SlScenario *s,
                                  uint64_t seed,
                                  int64_t k_lo,
                                  int64_t k_hi,
                                  double tol,
                                  double *max_gap);

// Sorted eigenvalues of the magnetic operator at tensor power `k` on a
// multigraph with `edge_count` edges `tails[i] → heads[i]` carrying phase
// `num[i]/den[i]` of a turn. `potential` (length `vertex_count`) may be
// null; `out` receives `vertex_count` values.
//
// # Safety
// Arrays must hold the stated number of elements.
enum SlStatus sl_magnetic_spectrum(size_t vertex_count,
                                   size_t edge_count,
                                   const size_t *tails,
                                   const size_t *heads,
                                   const int64_t *num,
                                   const int64_t *den,
                                   int64_t k,
                                   const double *potential,
                                   double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUNADA_LAB_H */

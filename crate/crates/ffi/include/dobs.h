#ifndef DOBS_H
#define DOBS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define DOBS_STRATEGY_NLJ 0

#define DOBS_STRATEGY_BNLJ 1

#define DOBS_STRATEGY_HASH 2

// All three strategies, cheapest per step.
#define DOBS_STRATEGY_AUTO 3

typedef enum DobsStatus {
  DOBS_STATUS_OK = 0,
  DOBS_STATUS_NULL_ARGUMENT = 1,
  DOBS_STATUS_INVALID_UTF8 = 2,
  DOBS_STATUS_PARSE = 3,
  // Unknown predicate, arity mismatch, unsafe query and similar.
  DOBS_STATUS_INVALID_INPUT = 4,
  DOBS_STATUS_INVALID_CONFIG = 5,
  DOBS_STATUS_RESOURCE_EXHAUSTED = 6,
  DOBS_STATUS_IO = 7,
  DOBS_STATUS_PANIC = 8,
} DobsStatus;

// An ontology base.
typedef struct DobsBase DobsBase;

// A statistics catalog.
typedef struct DobsCatalog DobsCatalog;

// Answers and counters of one query run.
typedef struct DobsResult DobsResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or an empty string.
// Valid until the next call into this library on the same thread.
const char *dobs_last_error(void);

// # Safety
// `s` must come from this library and not have been freed.
void dobs_string_free(char *s);

// Loads a base from DOB fact text.
//
// # Safety
// `dob` must be a NUL-terminated string; `out` must be writable.
enum DobsStatus dobs_base_from_dob(const char *dob, struct DobsBase **out);

// Loads a base from OWL abstract-syntax text, translating every document.
//
// # Safety
// `owl` must be a NUL-terminated string; `out` must be writable.
enum DobsStatus dobs_base_from_owl(const char *owl, struct DobsBase **out);

// Number of stored EOB facts.
//
// # Safety
// `base` must be a live handle or null (returns 0).
size_t dobs_base_fact_count(const struct DobsBase *base);

// # Safety
// `base` must come from this library and not have been freed.
void dobs_base_free(struct DobsBase *base);

// Builds a sampled catalog. Other sampling parameters take their defaults.
//
// # Safety
// `base` must be a live handle; `out` must be writable.
enum DobsStatus dobs_catalog_build(const struct DobsBase *base,
                                   double error,
                                   double confidence,
                                   uint64_t seed,
                                   struct DobsCatalog **out);

// Builds a catalog by enumerating every partition.
//
// # Safety
// `base` must be a live handle; `out` must be writable.
enum DobsStatus dobs_catalog_exact(const struct DobsBase *base, struct DobsCatalog **out);

// Reads a catalog in the text format written by [`dobs_catalog_to_text`].
//
// # Safety
// `text_in` must be a NUL-terminated string; `out` must be writable.
enum DobsStatus dobs_catalog_from_text(const char *text_in, struct DobsCatalog **out);

// # Safety
// `catalog` must be a live handle; `out` must be writable. Free the
// string with [`dobs_string_free`].
enum DobsStatus dobs_catalog_to_text(const struct DobsCatalog *catalog, char **out);

// # Safety
// `catalog` must come from this library and not have been freed.
void dobs_catalog_free(struct DobsCatalog *catalog);

// Optimizes and runs a conjunctive query such as `q(O):-areClasses(C,O).`.
//
// `strategy` is one of the `DOBS_STRATEGY_*` constants; `block_size` is
// used by the block nested loop. Set `optimize_order` to 0 to keep the
// body in its written order.
//
// # Safety
// `base` and `catalog` must be live handles, `query` a NUL-terminated
// string, `out` writable.
enum DobsStatus dobs_query(const struct DobsBase *base,
                           const struct DobsCatalog *catalog,
                           const char *query,
                           uint32_t strategy,
                           size_t block_size,
                           bool optimize_order,
                           struct DobsResult **out);

// # Safety
// `result` must be a live handle or null (returns 0).
size_t dobs_result_len(const struct DobsResult *result);

// Answer `index` as text, owned by the result. Null when out of range.
//
// # Safety
// `result` must be a live handle or null.
const char *dobs_result_answer(const struct DobsResult *result, size_t index);

// The executed plan as printed by `dobs query --explain`, owned by the result.
//
// # Safety
// `result` must be a live handle or null.
const char *dobs_result_plan(const struct DobsResult *result);

// Inferred IOB facts plus EOB facts accessed.
//
// # Safety
// `result` must be a live handle or null (returns 0).
uint64_t dobs_result_actual_cost(const struct DobsResult *result);

// # Safety
// `result` must be a live handle or null (returns NaN).
double dobs_result_estimated_cost(const struct DobsResult *result);

// # Safety
// `result` must come from this library and not have been freed.
void dobs_result_free(struct DobsResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DOBS_H */

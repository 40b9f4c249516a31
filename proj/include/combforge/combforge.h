/*
 * combforge C API: quantum comb calculus and memory-cost certification behind
 * a flat, ABI-stable surface.
 *
 * Conventions:
 *   - Objects (operators, combs, Choi maps, decompositions, groups,
 *     realizations) travel as opaque cf_object handles, created from JSON
 *     documents and destroyed with cf_object_free.
 *   - Every operation returns a cf_status; rich results (certificates,
 *     validation reports) come back as JSON strings allocated by the library
 *     and released with cf_string_free.
 *   - CF_VERIFY_FAIL means the computation ran but the requested check did
 *     not hold; CF_ERR_* mean the request itself could not be served.
 */

#ifndef COMBFORGE_COMBFORGE_H
#define COMBFORGE_COMBFORGE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cf_status {
  CF_OK = 0,
  CF_VERIFY_FAIL = 1,
  CF_ERR_IO = 2,
  CF_ERR_SCHEMA = 3,
  CF_ERR_ARG = 4,
  CF_ERR_INTERNAL = 5
} cf_status;

typedef enum cf_object_kind {
  CF_OBJECT_OPERATOR = 0,
  CF_OBJECT_DECOMPOSITION = 1,
  CF_OBJECT_GROUP = 2,
  CF_OBJECT_REALIZATION = 3
} cf_object_kind;

typedef struct cf_object cf_object;

const char* cf_version(void);

/* Message for the most recent failure on this thread (never NULL). */
const char* cf_last_error(void);

void cf_string_free(char* s);
void cf_object_free(cf_object* obj);

cf_status cf_object_parse(const char* json_text, cf_object** out);
cf_status cf_object_read_file(const char* path, cf_object** out);
cf_status cf_object_write_file(const cf_object* obj, const char* path);
cf_status cf_object_to_json(const cf_object* obj, char** json_out);
cf_status cf_object_kind_of(const cf_object* obj, cf_object_kind* kind_out);

/* ---- comb operations. Operator documents must carry step/direction
 * annotations where a comb or Choi structure is required. ---------------- */

/* Deterministic-comb validation; report always written on CF_OK or
 * CF_VERIFY_FAIL. */
cf_status cf_validate(const cf_object* comb, double tol, char** report_out);

/* Reduced k-step comb (k = 0 gives the scalar normalization). */
cf_status cf_reduce(const cf_object* comb, int k, cf_object** out);

/* Link product of two Choi documents over their shared wires. */
cf_status cf_link(const cf_object* a, const cf_object* b, cf_object** out);

/* Channels-with-memory realization; report lists memory dimensions. */
cf_status cf_realize(const cf_object* comb, double tol, cf_object** realization_out,
                     char** report_out);
cf_status cf_realization_channel_count(const cf_object* realization, size_t* count_out);
cf_status cf_realization_channel(const cf_object* realization, size_t index, cf_object** out);

/* Single-step memory certificate for a decomposition at `step` with target
 * dimension `dim`. */
cf_status cf_certify(const cf_object* comb, const cf_object* decomposition, int step, int dim,
                     double tol, char** report_out);

/* Nested multi-step certificate; steps/dims are parallel arrays. */
cf_status cf_certify_multi(const cf_object* comb, const cf_object* decomposition,
                           const int* steps, const int* dims, size_t count, double tol,
                           char** report_out);

/* Memory bounds for a channel given as a Choi document. restarts > 0 enables
 * the decomposition search. */
cf_status cf_channel_cost(const cf_object* choi, int restarts, uint64_t seed, double tol,
                          char** report_out);

/* Symmetry-derived bound at `step` from a finite unitary group commuting
 * with the comb. */
cf_status cf_symmetry_bound(const cf_object* comb, const cf_object* group, int step, uint64_t seed,
                            double tol, char** report_out);

/* Lower bound on the operational distance between two combs.
 * method: "seesaw" or "sampled". */
cf_status cf_discriminate(const cf_object* r0, const cf_object* r1, const char* method, int iters,
                          uint64_t seed, char** report_out);

/* Built-in families:
 *   "isotropic" (d, param = alpha), "werner" (d, param = gamma),
 *   "delay" (d), "upb" (three-qubit Shifts complement state).
 * Generators also write a short report (closed-form cost where known). */
cf_status cf_example(const char* family, int d, double param, cf_object** out, char** report_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* COMBFORGE_COMBFORGE_H */

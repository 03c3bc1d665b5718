/* C interface to the rbbr library. All functions are thread-compatible:
   distinct handles may be used from different threads concurrently. */
#ifndef RBBR_RBBR_H
#define RBBR_RBBR_H

#include <stddef.h>
#include <stdint.h>

#if defined(RBBR_BUILDING_LIBRARY)
#define RBBR_API __attribute__((visibility("default")))
#else
#define RBBR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rbbr_status {
  RBBR_OK = 0,
  RBBR_PROPERTY_FAILED = 1,
  RBBR_CONFIG_ERROR = 2,
  RBBR_SOLVER_ERROR = 3,
  RBBR_INVALID_ARGUMENT = 4,
  RBBR_INTERNAL_ERROR = 5
} rbbr_status;

typedef enum rbbr_regularizer_kind {
  RBBR_SHANNON = 0,
  RBBR_TSALLIS = 1,
  RBBR_BURG = 2
} rbbr_regularizer_kind;

typedef struct rbbr_scenario rbbr_scenario;
typedef struct rbbr_result rbbr_result;

RBBR_API const char* rbbr_version(void);

/* Message of the last failed call on this thread ("" when none). */
RBBR_API const char* rbbr_last_error(void);

RBBR_API rbbr_status rbbr_scenario_load_file(const char* path, rbbr_scenario** out);
RBBR_API rbbr_status rbbr_scenario_load_string(const char* json, const char* source_name, rbbr_scenario** out);
RBBR_API void rbbr_scenario_free(rbbr_scenario* scenario);
RBBR_API rbbr_status rbbr_scenario_set_seed(rbbr_scenario* scenario, uint64_t seed);
/* 16 hex digits; valid until the scenario is modified or freed. */
RBBR_API const char* rbbr_scenario_digest(const rbbr_scenario* scenario);
RBBR_API size_t rbbr_scenario_types(const rbbr_scenario* scenario);
RBBR_API size_t rbbr_scenario_strategies(const rbbr_scenario* scenario);

/* Commands. On RBBR_OK or RBBR_PROPERTY_FAILED *out holds the result. The
   initial condition is "seed", "uniform", "vertex:<k>" or NULL for the
   scenario's own; starts = 0 uses the scenario's count; eps = NULL uses the
   scenario's sweep list. */
RBBR_API rbbr_status rbbr_simulate(const rbbr_scenario* scenario, const char* initial, rbbr_result** out);
RBBR_API rbbr_status rbbr_equilibrium(const rbbr_scenario* scenario, size_t starts, rbbr_result** out);
RBBR_API rbbr_status rbbr_check(const rbbr_scenario* scenario, const char* suite, rbbr_result** out);
RBBR_API rbbr_status rbbr_sweep(const rbbr_scenario* scenario, const double* eps, size_t count, rbbr_result** out);

RBBR_API int rbbr_result_exit_code(const rbbr_result* result);
RBBR_API const char* rbbr_result_summary(const rbbr_result* result);
RBBR_API size_t rbbr_result_file_count(const rbbr_result* result);
RBBR_API const char* rbbr_result_file_name(const rbbr_result* result, size_t index);
RBBR_API const char* rbbr_result_file_content(const rbbr_result* result, size_t index);
/* Writes every file into out_dir (created if missing). */
RBBR_API rbbr_status rbbr_result_write(const rbbr_result* result, const char* out_dir);
RBBR_API void rbbr_result_free(rbbr_result* result);

/* Regularized best response y = argmax <y,u> - eps v(y) over the simplex.
   q is used by RBBR_TSALLIS only. */
RBBR_API rbbr_status rbbr_conjugate_argmax(rbbr_regularizer_kind kind, double q, double eps, const double* u,
                                           size_t n, double* out);
RBBR_API rbbr_status rbbr_logit(double eps, const double* u, size_t n, double* out);

#ifdef __cplusplus
}
#endif

#endif

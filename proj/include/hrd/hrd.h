/* SPDX-License-Identifier: Apache-2.0 */
#ifndef HRD_HRD_H
#define HRD_HRD_H

/*
 * C interface to the hysteresis reaction-diffusion library.
 *
 * All functions return an hrd_status. On failure the message and, for
 * validation errors, the offending config path are available through
 * hrd_last_error() / hrd_last_error_field() until the next call on the same
 * thread. Handles are opaque and owned by the caller; release them with the
 * matching *_free function.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#  define HRD_API __declspec(dllexport)
#else
#  define HRD_API __attribute__((visibility("default")))
#endif

typedef enum hrd_status {
  HRD_OK = 0,
  HRD_ERR_VALIDATION = 2,
  HRD_ERR_NUMERIC = 3,
  HRD_ERR_NON_CONTRACTION = 4,
  HRD_ERR_INVALID_ARGUMENT = 5,
  HRD_ERR_IO = 6,
  HRD_ERR_INTERNAL = 7
} hrd_status;

typedef struct hrd_scenario hrd_scenario;
typedef struct hrd_table hrd_table;
typedef struct hrd_trajectory hrd_trajectory;
typedef struct hrd_optimization hrd_optimization;

HRD_API const char* hrd_version(void);
HRD_API const char* hrd_last_error(void);
HRD_API const char* hrd_last_error_field(void);

/* Scenarios */
HRD_API hrd_status hrd_scenario_from_json(const char* json_text, hrd_scenario** out);
HRD_API hrd_status hrd_scenario_set_seed(hrd_scenario* scenario, uint64_t seed);
HRD_API uint64_t hrd_scenario_seed(const hrd_scenario* scenario);
HRD_API void hrd_scenario_free(hrd_scenario* scenario);

/* Tables: row-major numeric data with named columns. */
HRD_API size_t hrd_table_rows(const hrd_table* table);
HRD_API size_t hrd_table_columns(const hrd_table* table);
HRD_API const char* hrd_table_column_name(const hrd_table* table, size_t column);
HRD_API double hrd_table_value(const hrd_table* table, size_t row, size_t column);
/* CSV with 17 significant digits, written via temp file + rename. */
HRD_API hrd_status hrd_table_write_csv(const hrd_table* table, const char* path);
HRD_API void hrd_table_free(hrd_table* table);

/* Scalar stop/play on raw arrays. `stop` and `play` (may be NULL) receive n
 * values. */
HRD_API hrd_status hrd_stop_evaluate(const double* times, const double* values, size_t n,
                                     double a, double b, double z0, double* stop,
                                     double* play);
HRD_API hrd_status hrd_stop_directional_derivative(const double* times, const double* values,
                                                   const double* direction, size_t n,
                                                   double a, double b, double z0,
                                                   double* derivative);

/* hysteresis-eval: config JSON holds {a, b, z0} (optionally under
 * "hysteresis"); input CSV has header t,v. Output table columns t,stop,play. */
HRD_API hrd_status hrd_hysteresis_eval_files(const char* config_json, const char* input_csv_path,
                                             hrd_table** out);

/* State solve for the scenario's control coefficients (zero source without a
 * control block). */
HRD_API hrd_status hrd_simulate(const hrd_scenario* scenario, hrd_trajectory** out);
/* Columns t,z,S_y,norm_y. */
HRD_API hrd_status hrd_trajectory_table(const hrd_trajectory* trajectory, hrd_table** out);
HRD_API hrd_status hrd_trajectory_write_snapshot(const hrd_trajectory* trajectory,
                                                 const char* path);
HRD_API void hrd_trajectory_free(hrd_trajectory* trajectory);

/* Directional derivative along control.direction; columns t,S_zeta,w,norm_zeta. */
HRD_API hrd_status hrd_sensitivity(const hrd_scenario* scenario, hrd_table** out);
/* Difference-quotient study over fd.lambdas; columns lambda,error. */
HRD_API hrd_status hrd_fd_check(const hrd_scenario* scenario, hrd_table** out);
/* Fractional-power semigroup report; one row per (theta, component). */
HRD_API hrd_status hrd_diagnose_semigroup(const hrd_scenario* scenario, hrd_table** out);

/* Descent on the reduced cost. A stalled line search still returns HRD_OK;
 * query hrd_optimization_stalled. */
HRD_API hrd_status hrd_optimize(const hrd_scenario* scenario, hrd_optimization** out);
/* Columns iter,J,grad_inf,step. */
HRD_API hrd_status hrd_optimization_history(const hrd_optimization* result, hrd_table** out);
HRD_API size_t hrd_optimization_coefficient_count(const hrd_optimization* result);
HRD_API double hrd_optimization_coefficient(const hrd_optimization* result, size_t index);
HRD_API int hrd_optimization_converged(const hrd_optimization* result);
HRD_API int hrd_optimization_stalled(const hrd_optimization* result);
HRD_API const char* hrd_optimization_message(const hrd_optimization* result);
HRD_API void hrd_optimization_free(hrd_optimization* result);

#ifdef __cplusplus
}
#endif

#endif /* HRD_HRD_H */

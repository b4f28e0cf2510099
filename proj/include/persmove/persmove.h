/*
 * Copyright 2026 The persmove Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * persmove C API.
 *
 * Every fallible call returns a pm_status; on failure a description is
 * available from pm_last_error() on the same thread until the next call.
 * Objects are opaque handles created by pm_*_create / pm_*_read / pm_*_build
 * and released with the matching pm_*_destroy (NULL is accepted). Pointers
 * returned by accessors stay valid for the lifetime of their handle.
 *
 * A handle may be used from one thread at a time; distinct handles are
 * independent.
 */

#ifndef PERSMOVE_PERSMOVE_H
#define PERSMOVE_PERSMOVE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PERSMOVE_BUILDING)
#    define PM_API __declspec(dllexport)
#  else
#    define PM_API __declspec(dllimport)
#  endif
#else
#  define PM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pm_status {
  PM_OK = 0,
  PM_ERR_INVALID_ARGUMENT = 1,
  PM_ERR_INPUT = 2,
  PM_ERR_INSUFFICIENT_DATA = 3,
  PM_ERR_INTERNAL = 4
} pm_status;

typedef enum pm_extremum_kind { PM_MINIMUM = 0, PM_MAXIMUM = 1 } pm_extremum_kind;

typedef enum pm_window_status { PM_WINDOW_OK = 0, PM_WINDOW_INSUFFICIENT = 1 } pm_window_status;

typedef struct pm_sample {
  int64_t time_ns;
  int64_t ticks;
} pm_sample;

typedef struct pm_extremum {
  int64_t time_ns;
  int64_t ticks;
  int32_t kind; /* pm_extremum_kind */
} pm_extremum;

typedef struct pm_pair {
  pm_extremum min_ext;
  pm_extremum max_ext;
  int64_t size;
} pm_pair;

typedef struct pm_spectrum_point {
  int64_t size;
  int64_t count;
  int64_t contribution; /* 2 * count * size */
} pm_spectrum_point;

typedef struct pm_fit_config {
  int64_t xmin_lo; /* smallest xmin candidate, >= 1 */
  int64_t xmin_hi; /* largest xmin candidate, 0 = unbounded */
  uint64_t min_tail;
} pm_fit_config;

typedef struct pm_fit_result {
  int64_t xmin;
  double count_exponent;
  double alpha; /* count_exponent - 1 */
  double ks_distance;
  uint64_t n_tail;
  double amplitude;
} pm_fit_result;

typedef struct pm_rolling_config {
  int64_t window_ns;
  int64_t step_ns;
  pm_fit_config fit;
} pm_rolling_config;

typedef struct pm_rolling_point {
  int64_t window_end_ns;
  int32_t status; /* pm_window_status; fit is zeroed when insufficient */
  uint64_t pair_count;
  pm_fit_result fit;
} pm_rolling_point;

typedef struct pm_read_options {
  const char* tick_size; /* decimal text, e.g. "0.0001" */
  const char* columns;   /* e.g. "time,bid,ask" */
  char delimiter;
} pm_read_options;

typedef struct pm_roll_rule {
  int32_t days_before_expiry;
  uint32_t month_mask; /* bit (m - 1) set for each eligible month m */
} pm_roll_rule;

typedef struct pm_splice {
  const char* from_contract;
  const char* to_contract;
  int64_t roll_time_ns;
  int64_t adjustment;
} pm_splice;

typedef struct pm_selftest_report {
  uint64_t walks_checked;
  uint64_t oracle_mismatches;
  uint64_t conservation_failures;
  double fitted_exponent;
  int64_t fitted_xmin;
  int32_t passed;
} pm_selftest_report;

typedef struct pm_series pm_series;
typedef struct pm_decomposer pm_decomposer;
typedef struct pm_decomposition pm_decomposition;
typedef struct pm_spectrum pm_spectrum;
typedef struct pm_rolling pm_rolling;
typedef struct pm_calendar pm_calendar;
typedef struct pm_continuous pm_continuous;

PM_API const char* pm_version(void);
PM_API const char* pm_last_error(void);
PM_API const char* pm_status_string(pm_status status);

PM_API void pm_fit_config_init(pm_fit_config* config);
PM_API void pm_rolling_config_init(pm_rolling_config* config);
PM_API void pm_roll_rule_init(pm_roll_rule* rule);
PM_API void pm_read_options_init(pm_read_options* options);

/* Series ---------------------------------------------------------------- */

PM_API pm_status pm_series_create(const pm_sample* samples, size_t count, pm_series** out);
PM_API pm_status pm_series_read(const char* path, const pm_read_options* options, pm_series** out);
PM_API size_t pm_series_size(const pm_series* series);
PM_API const pm_sample* pm_series_data(const pm_series* series);
PM_API int64_t pm_series_total_variation(const pm_series* series);
PM_API void pm_series_destroy(pm_series* series);

/* Streaming decomposition ------------------------------------------------ */

PM_API pm_status pm_decomposer_create(pm_decomposer** out);
/* new_pairs (optional) receives the number of pairs decided by this sample. */
PM_API pm_status pm_decomposer_push(pm_decomposer* d, pm_sample sample, size_t* new_pairs);
PM_API pm_status pm_decomposer_finish(const pm_decomposer* d, pm_decomposition** out);
PM_API void pm_decomposer_destroy(pm_decomposer* d);

PM_API pm_status pm_decompose(const pm_series* series, pm_decomposition** out);
PM_API size_t pm_decomposition_pair_count(const pm_decomposition* d);
PM_API const pm_pair* pm_decomposition_pairs(const pm_decomposition* d);
PM_API size_t pm_decomposition_top_count(const pm_decomposition* d);
PM_API const pm_extremum* pm_decomposition_top(const pm_decomposition* d);
PM_API int64_t pm_decomposition_tv_total(const pm_decomposition* d);
PM_API int64_t pm_decomposition_tv_top(const pm_decomposition* d);
PM_API void pm_decomposition_destroy(pm_decomposition* d);

/* Spectrum and power-law fit -------------------------------------------- */

PM_API pm_status pm_spectrum_from_decomposition(const pm_decomposition* d, pm_spectrum** out);
PM_API pm_status pm_spectrum_from_sizes(const int64_t* sizes, size_t count, pm_spectrum** out);
PM_API size_t pm_spectrum_size(const pm_spectrum* s);
PM_API const pm_spectrum_point* pm_spectrum_points(const pm_spectrum* s);
PM_API int64_t pm_spectrum_area(const pm_spectrum* s);
PM_API pm_status pm_spectrum_fit(const pm_spectrum* s, const pm_fit_config* config, pm_fit_result* out);
PM_API void pm_spectrum_destroy(pm_spectrum* s);

PM_API pm_status pm_fit_sizes(const int64_t* sizes, size_t count, const pm_fit_config* config,
                              pm_fit_result* out);
PM_API pm_status pm_mle_count_exponent(const int64_t* sizes, size_t count, int64_t xmin, double* out);
PM_API pm_status pm_ks_distance(const int64_t* sizes, size_t count, int64_t xmin, double exponent,
                                double* out);
/* A * size^-alpha */
PM_API double pm_fit_evaluate(const pm_fit_result* fit, int64_t size);

/* Rolling estimates ------------------------------------------------------ */

PM_API pm_status pm_rolling_fit(const pm_series* series, const pm_rolling_config* config, pm_rolling** out);
PM_API size_t pm_rolling_size(const pm_rolling* r);
PM_API const pm_rolling_point* pm_rolling_points(const pm_rolling* r);
PM_API void pm_rolling_destroy(pm_rolling* r);

/* Continuous contracts --------------------------------------------------- */

PM_API pm_status pm_calendar_read(const char* path, char delimiter, pm_calendar** out);
PM_API size_t pm_calendar_size(const pm_calendar* c);
PM_API void pm_calendar_destroy(pm_calendar* c);

PM_API pm_status pm_continuous_build(const char* const* contract_ids, const pm_series* const* series,
                                     size_t count, const pm_calendar* calendar, const pm_roll_rule* rule,
                                     pm_continuous** out);
PM_API const pm_series* pm_continuous_series(const pm_continuous* c);
PM_API size_t pm_continuous_splice_count(const pm_continuous* c);
PM_API pm_status pm_continuous_splice(const pm_continuous* c, size_t index, pm_splice* out);
PM_API void pm_continuous_destroy(pm_continuous* c);

/* Self test -------------------------------------------------------------- */

/* walks = 0 uses the default count. */
PM_API pm_status pm_selftest(uint64_t seed, uint64_t walks, pm_selftest_report* out);

#ifdef __cplusplus
}
#endif

#endif /* PERSMOVE_PERSMOVE_H */

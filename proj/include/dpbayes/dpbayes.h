// Copyright 2026 The dpbayes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to dpbayes. Every function returns a dpb_status; on failure
 * dpb_last_error_message() describes the error for the calling thread.
 * Strings returned through char** out-parameters are owned by the caller and
 * released with dpb_string_free. */

#ifndef DPBAYES_DPBAYES_H_
#define DPBAYES_DPBAYES_H_

#include <stddef.h>
#include <stdint.h>

#if defined(DPB_BUILDING_LIBRARY)
#define DPB_API __attribute__((visibility("default")))
#else
#define DPB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dpb_status {
  DPB_OK = 0,
  DPB_INVALID_ARGUMENT = 1,
  DPB_PARSE_ERROR = 2,
  DPB_IO_ERROR = 3,
  DPB_DOMAIN_ERROR = 4,
  DPB_INTERNAL_ERROR = 99
} dpb_status;

typedef struct dpb_family dpb_family;
typedef struct dpb_dataset dpb_dataset;
typedef struct dpb_session dpb_session;

DPB_API const char* dpb_version(void);
DPB_API const char* dpb_last_error_message(void);
DPB_API void dpb_string_free(char* s);

DPB_API dpb_status dpb_kappa_constants(double* omega, double* kappa);

/* name: exponential, laplace, beta-binomial, normal, bayesnet, finite.
 * params: n_params strings of the form "key=value". */
DPB_API dpb_status dpb_family_create(const char* name,
                                     const char* const* params,
                                     size_t n_params, int paper_normal_variant,
                                     dpb_family** out);
DPB_API void dpb_family_free(dpb_family* family);

/* format: "csv", "json" or "auto". */
DPB_API dpb_status dpb_dataset_load(const char* path, const char* format,
                                    dpb_dataset** out);
DPB_API dpb_status dpb_dataset_from_scalars(const double* values, size_t n,
                                            dpb_dataset** out);
DPB_API size_t dpb_dataset_size(const dpb_dataset* dataset);
DPB_API void dpb_dataset_free(dpb_dataset* dataset);

/* metric: "hamming", "absdiff", "normal" or "weighted:v1,v2,...". */
DPB_API dpb_status dpb_distance(const char* metric, const dpb_dataset* x,
                                const dpb_dataset* y, double* out);

/* Certificate, privacy guarantee and robustness curve. metric may be NULL
 * (the family's own); iid_n <= 0 means a single observation. */
DPB_API dpb_status dpb_report(const dpb_family* family, const char* metric,
                              int iid_n, char** json_out, char** curve_csv_out);

/* Largest number of answers before datasets at distance rho_target become
 * distinguishable with probability 1 - delta. */
DPB_API dpb_status dpb_budget_check(const dpb_family* family,
                                    double rho_target, double delta,
                                    long long* max_safe_queries);

/* Answers a JSON array of queries and returns the JSON-lines transcript. */
DPB_API dpb_status dpb_respond(const dpb_family* family,
                               const dpb_dataset* data, uint64_t seed,
                               const char* queries_json, int include_theta,
                               char** transcript_out);

/* Distinguishing experiment with truth x against y; returns a CSV with a
 * header row. partition_size <= 0 picks the default. */
DPB_API dpb_status dpb_attack(const dpb_family* family, const dpb_dataset* x,
                              const dpb_dataset* y, int n, double delta,
                              int trials, int partition_size, uint64_t seed,
                              char** csv_out);

/* Runs every applicable check. *all_passed is 1 when every check passed. */
DPB_API dpb_status dpb_verify(const dpb_family* family, uint64_t seed,
                              int* all_passed, char** json_out);

DPB_API dpb_status dpb_session_open(const dpb_family* family,
                                    const dpb_dataset* data, uint64_t seed,
                                    dpb_session** out);
/* query_json: one query object. answer_json_out: JSON array of numbers. */
DPB_API dpb_status dpb_session_answer(dpb_session* session,
                                      const char* query_json,
                                      char** answer_json_out);
DPB_API dpb_status dpb_session_transcript(const dpb_session* session,
                                          int include_theta, char** out);
DPB_API void dpb_session_free(dpb_session* session);

#ifdef __cplusplus
}
#endif

#endif /* DPBAYES_DPBAYES_H_ */

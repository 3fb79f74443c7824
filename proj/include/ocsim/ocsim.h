// Copyright 2026 The ocsim Authors
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

/* C interface to ocsim. Every function returns an ocs_status; on failure the message is
 * available from ocs_last_error() on the same thread. Strings handed out through char **
 * parameters are owned by the caller and released with ocs_string_free. */

#ifndef OCSIM_OCSIM_H
#define OCSIM_OCSIM_H

#include <stdint.h>

#if defined(OCSIM_BUILDING_LIBRARY)
#define OCSIM_API __attribute__((visibility("default")))
#else
#define OCSIM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ocs_status {
    OCS_OK = 0,
    OCS_ERR_VALIDATION = 1,
    OCS_ERR_SOLVER = 2,
    OCS_ERR_SIZING = 3,
} ocs_status;

typedef struct ocs_state_set ocs_state_set;
typedef struct ocs_devices ocs_devices;
typedef struct ocs_simulation ocs_simulation;
typedef struct ocs_witness ocs_witness;
typedef struct ocs_bound ocs_bound;

OCSIM_API const char *ocs_version(void);
/* Message of the last failed call on this thread; "" if none. */
OCSIM_API const char *ocs_last_error(void);
OCSIM_API void ocs_string_free(char *s);

/* State sets. kind: "bb84", "mub" (d, n bases), "sic" (d), "pair". */
OCSIM_API int ocs_state_set_generate(const char *kind, int d, int n, ocs_state_set **out);
OCSIM_API int ocs_state_set_from_json(const char *json, int repair, ocs_state_set **out);
OCSIM_API int ocs_state_set_to_json(const ocs_state_set *set, char **json);
OCSIM_API int ocs_state_set_size(const ocs_state_set *set, int *m);
OCSIM_API int ocs_state_set_dim(const ocs_state_set *set, int *d);
OCSIM_API int ocs_state_set_label(const ocs_state_set *set, int x, char **label);
OCSIM_API int ocs_state_set_noise(const ocs_state_set *set, double v, ocs_state_set **out);
OCSIM_API int ocs_state_set_extend(const ocs_state_set *set, ocs_state_set **out);
OCSIM_API void ocs_state_set_free(ocs_state_set *set);

/* Closed-form bounds. */
OCSIM_API int ocs_harmonic(int n, double *h);
OCSIM_API int ocs_bound_result1(int d, int r, double *v);
OCSIM_API int ocs_bound_result1_subspace(int d, int s, int r, double *v);
OCSIM_API int ocs_bound_result3(int d, int m, int r, double *v);
OCSIM_API int ocs_mc_mean_max_overlap(int d, int r, long n_samples, uint64_t seed, int threads, double *estimate,
                                      double *std_error);
OCSIM_API int ocs_mc_verify_result1(int d, int r, long n_samples, uint64_t seed, int threads, double *distance);

/* Device families. */
OCSIM_API int ocs_devices_random(int d, int r, int n, uint64_t seed, ocs_devices **out);
/* Every r-subset of the first m mutually unbiased bases in dimension d. */
OCSIM_API int ocs_devices_bases(int d, int m, int r, ocs_devices **out);
/* {"devices": [...]} device list or model file. */
OCSIM_API int ocs_devices_from_json(const char *json, ocs_devices **out);
OCSIM_API int ocs_devices_to_json(const ocs_devices *devices, char **json);
OCSIM_API int ocs_devices_count(const ocs_devices *devices, int *n);
OCSIM_API void ocs_devices_free(ocs_devices *devices);

/* Largest visibility with a classical model over the devices. settings_json may be NULL or an
 * object with any of: method ("automatic", "explicit", "column_generation"), variable_cap,
 * explicit_row_limit, support_threshold, pricing_tol, max_rounds, refine_iterations, refine_step,
 * refine_seed, refine_mode ("per_device", "global_rotation"). */
OCSIM_API int ocs_simulate(const ocs_state_set *set, const ocs_devices *devices, const char *settings_json,
                           ocs_simulation **out);
OCSIM_API int ocs_simulation_visibility(const ocs_simulation *sim, double *v);
OCSIM_API int ocs_simulation_to_json(const ocs_simulation *sim, char **json);
/* The extracted classical model alone. */
OCSIM_API int ocs_simulation_model_json(const ocs_simulation *sim, char **json);
OCSIM_API void ocs_simulation_free(ocs_simulation *sim);

/* Witnesses. */
OCSIM_API int ocs_witness_mub(int d, int n, ocs_witness **out);
OCSIM_API int ocs_witness_from_json(const char *json, ocs_witness **out);
OCSIM_API int ocs_witness_to_json(const ocs_witness *w, char **json);
OCSIM_API void ocs_witness_free(ocs_witness *w);
OCSIM_API int ocs_witness_evaluate(const ocs_witness *w, const ocs_state_set *set, double *value);
/* settings_json may be NULL or hold symmetry_reduce, threads, cap, keep_values, checkpoint_path,
 * checkpoint_every. */
OCSIM_API int ocs_witness_bound(const ocs_witness *w, const char *settings_json, ocs_bound **out);
OCSIM_API int ocs_critical_visibility(const ocs_witness *w, const ocs_state_set *target, double beta, double *v);
OCSIM_API int ocs_bound_beta(const ocs_bound *b, double *beta, double *uncertainty);
OCSIM_API int ocs_bound_to_json(const ocs_bound *b, char **json);
OCSIM_API void ocs_bound_free(ocs_bound *b);

/* Steering inequality JSON to its witness and exact bound. */
OCSIM_API int ocs_steering_to_witness(const char *inequality_json, ocs_witness **witness, ocs_bound **zeta);

/* Joint measurability of the binarized measurements {v rho_x + (1 - v) I/d, ...}. parent_json may be
 * NULL; when feasible it receives the parent measurement. */
OCSIM_API int ocs_jm_feasible(const ocs_state_set *set, double v, int *feasible, double *residual, char **parent_json);
OCSIM_API int ocs_jm_threshold(const ocs_state_set *set, double width, double *v, int *sdp_calls);

/* Parent measurement of a full-basis model (bases are completed first), and the qubit model of a parent. */
OCSIM_API int ocs_parent_from_model(const char *model_json, char **parent_json);
/* tol <= 0 selects 1e-9; SDP-derived parents need about 1e-7. */
OCSIM_API int ocs_qubit_model_from_parent(const char *parent_json, double tol, char **model_json);

/* Named check suites: haar, table1, witness, jm, all. */
OCSIM_API int ocs_verify(const char *suite, uint64_t seed, int threads, char **csv, int *all_pass);

#ifdef __cplusplus
}
#endif

#endif

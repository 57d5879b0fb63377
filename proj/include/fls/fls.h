// Copyright 2026 The fls Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the free-fermion open-dynamics simulator. */
#ifndef FLS_FLS_H
#define FLS_FLS_H

#include <stddef.h>
#include <stdint.h>

#if defined(FLS_BUILDING_LIBRARY)
#define FLS_API __attribute__((visibility("default")))
#else
#define FLS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fls_status {
  FLS_OK = 0,
  FLS_ERR_INVALID_ARGUMENT = 1,
  FLS_ERR_SCHEMA = 2,
  FLS_ERR_DIMENSION = 3,
  FLS_ERR_CLASSIFICATION = 4,
  FLS_ERR_STEP_TOO_LARGE = 5,
  FLS_ERR_INFEASIBLE = 6,
  FLS_ERR_NUMERICAL = 7,
  FLS_ERR_INTERNAL = 8
} fls_status;

typedef enum fls_class { FLS_CLASS_EC1 = 0, FLS_CLASS_EC2 = 1, FLS_CLASS_EC3 = 2, FLS_CLASS_GENERAL = 3 } fls_class;

typedef struct fls_model fls_model;
typedef struct fls_distribution fls_distribution;

/* Message of the last failed call on this thread; empty when none. */
FLS_API const char* fls_last_error(void);
FLS_API const char* fls_version(void);
FLS_API const char* fls_class_name(int class_tag);

FLS_API fls_status fls_model_from_json(const char* text, fls_model** out);
FLS_API fls_status fls_model_from_file(const char* path, fls_model** out);
FLS_API void fls_model_free(fls_model* model);

typedef struct fls_model_info {
  int modes;
  int class_tag;
  int mixed;
  int has_seed;
  uint64_t seed;
  double t_final;
  double target_epsilon;
  uint64_t config_hash;
  int needs_linear_ancilla;
  size_t channels;
} fls_model_info;

FLS_API fls_status fls_model_info_get(const fls_model* model, fls_model_info* info);

/* Unitary sampling; the model must have no Lindblad operators. Sample i uses
   its own stream derived from (seed, i), so results do not depend on threads. */
FLS_API fls_status fls_sample(const fls_model* model, uint64_t seed, size_t n, int threads, uint64_t* masks_out);
/* Exact Pfaffian distribution of the unitary model (L <= 14). */
FLS_API fls_status fls_enumerate(const fls_model* model, fls_distribution** out);

typedef enum fls_estimator { FLS_ESTIMATOR_SAMPLE = 0, FLS_ESTIMATOR_AVERAGE = 1 } fls_estimator;

typedef struct fls_simulate_options {
  double dt;         /* <= 0 selects the timestep from the error bound */
  double epsilon;    /* target for automatic dt; <= 0 uses the model value */
  long trajectories;
  uint64_t seed;
  int threads;
  int estimator;
} fls_simulate_options;

typedef struct fls_simulate_info {
  double dt;
  int steps;
  int ancilla_modes;
  long trajectories;
} fls_simulate_info;

FLS_API fls_status fls_simulate(const fls_model* model, const fls_simulate_options* opts, fls_distribution** out,
                                fls_simulate_info* info);
/* Dense master-equation reference (L <= 10). */
FLS_API fls_status fls_oracle(const fls_model* model, fls_distribution** out);

/* Distributions are sparse lists of (mask, probability, standard error) sorted by mask. */
FLS_API int fls_distribution_modes(const fls_distribution* d);
FLS_API size_t fls_distribution_size(const fls_distribution* d);
FLS_API fls_status fls_distribution_entry(const fls_distribution* d, size_t i, uint64_t* mask, double* p,
                                          double* stderr_out);
FLS_API void fls_distribution_free(fls_distribution* d);

FLS_API fls_status fls_tvd(const double* p, const double* q, size_t n, double* out);

typedef struct fls_bound_report {
  int class_tag;
  int modes;
  int k_m;
  double t;
  double dt;
  double integral;
  double prefactor;
  double prefactor_literal;
  double epsilon;
  double epsilon_literal;
  double effective_modes;
  double runtime_per_trajectory;
  double runtime_total;
} fls_bound_report;

/* dt <= 0 selects the largest admissible dt for target_epsilon. */
FLS_API fls_status fls_bound(const fls_model* model, double t, double target_epsilon, double dt, long trajectories,
                             fls_bound_report* out);

typedef struct fls_gate_spec {
  double J;
  double Gamma;
  double Gamma_prime;
  double zeta;
  double epsilon0;
  double t; /* <= 0 selects pi / J */
} fls_gate_spec;

typedef struct fls_cz_report {
  double coherence_re[16]; /* row-major <a|E(|a><b|)|b> */
  double coherence_im[16];
  double survival[4];
  double leakage[4];
  double mean_leakage;
  int blocked_state;
  double epsilon;
  double phase_11;
  double fidelity_11;
  double process_fidelity;
  double average_fidelity;
} fls_cz_report;

/* scheme: "zeno", "atom1" or "atom2". */
FLS_API fls_status fls_simulate_cz(const fls_gate_spec* spec, const char* scheme, fls_cz_report* out);
FLS_API fls_status fls_leakage_nonhermitian(const fls_gate_spec* spec, int four_level, double* survival,
                                            double* epsilon);
FLS_API fls_status fls_total_error(const fls_gate_spec* spec, double* epsilon);
FLS_API fls_status fls_optimal_time(const fls_gate_spec* spec, double* t, double* epsilon);

typedef enum fls_regime { FLS_REGIME_HARD = 0, FLS_REGIME_INCONCLUSIVE = 1, FLS_REGIME_EC1_EASY = 2 } fls_regime;
FLS_API const char* fls_regime_name(int regime);
/* Writes up to capacity points; *count receives the total number of points. */
FLS_API fls_status fls_sweep_hardness(double ratio_min, double ratio_max, int points, double p0, size_t capacity,
                                      double* ratio, double* epsilon, int* regime, size_t* count);

#ifdef __cplusplus
}
#endif

#endif

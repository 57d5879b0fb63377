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

#pragma once

#include <string>
#include <vector>

#include "fls/core.hpp"
#include "fls/model.hpp"

namespace fls {

// Spectral norms of the two factors of one correction term D1 rho D2.
// Dense values are -1 when not computed.
struct CorrectionTerm {
  std::string label;
  double norm1 = 0.0;
  double norm2 = 0.0;
  double dense1 = -1.0;
  double dense2 = -1.0;
};

struct CorrectionProfile {
  ClassTag class_tag = ClassTag::EC1;
  int k_m = 4;
  std::vector<CorrectionTerm> terms;
  bool has_dense = false;
  // sum of norm1 * norm2
  double weight() const;
  double dense_weight() const;
};

// Triangle-inequality bounds with unit-norm Majorana monomials.
double norm_bound(const HamiltonianSegment& h);
double norm_bound(const LindbladOperator& op);

// Correction terms at time t. Dense norms are added when `dense` and L <= 8.
CorrectionProfile correction_norms(const Model& model, double t, bool dense = false);

// Number of configurations within Hamming distance k of a fixed one.
double hamming_ball(int modes, int k);

struct BoundReport {
  ClassTag class_tag = ClassTag::EC1;
  int modes = 0;
  int k_m = 4;
  double dt = 0.0;
  double integral = 0.0;           // int_0^t sum_alpha |D1||D2|
  double prefactor = 0.0;          // hamming_ball(L, k_m)^2
  double prefactor_literal = 0.0;  // L^(2 k_m) / (k_m!)^2
  double epsilon = 0.0;
  double epsilon_literal = 0.0;
};

double correction_integral(const Model& model, double t);
BoundReport bound_report(const Model& model, double t, double dt);
double error_bound(const Model& model, double t, double dt);

// Largest dt = t/n with error_bound <= target, no longer than any schedule
// piece, and below the per-step jump-probability limit.
double choose_dt(const Model& model, double t, double target_epsilon);

struct RuntimeEstimate {
  double effective_modes = 0.0;
  double per_trajectory = 0.0;
  double total = 0.0;
};

// Operation count L^4 + L^3 t/dt per trajectory; with ancilla_per_step, L -> L + t/dt.
RuntimeEstimate runtime_estimate(int modes, double t, double dt, long n_trajectories, bool ancilla_per_step = false);

}  // namespace fls

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

#include <random>
#include <vector>

#include "fls/core.hpp"
#include "fls/gaussian.hpp"
#include "fls/pfaffian.hpp"

namespace fls {

// Contraction matrix of the Heisenberg-picture readout operators.
// Rows 0..K-1 stand for U^dagger c_m U, rows K..2K-1 for their adjoints, with
// U^dagger c_m U = sum_j W_mj g_j and W = T/2 taken from the inverse propagator.
// Entries p<q are <r'| x_p x_q |r'>, so the initial configuration enters here.
SkewMatrix build_M(const ComplexMatrix& heisenberg_T, const std::vector<int>& initial_occupation);

// P(outcomes on `sites`) for one initial sector, from the catalog matrix above.
// Sites index catalog rows and must be increasing.
Complex catalog_probability(const SkewMatrix& m, int rows, const std::vector<int>& sites, const std::vector<int>& bits);

struct ClampStats {
  long clamped = 0;
  double max_negative = 0.0;
  double max_imag = 0.0;
};
ClampStats clamp_stats();
void reset_clamp_stats();

// Output distribution of a free-fermion evolution on the first `system_modes`
// modes. Modes past the system are ancillas starting in vacuum; with
// `linear_ancilla` the last mode is the linear-term ancilla, averaged over its
// two initial states and summed over its outcomes.
class OutcomeDistribution {
 public:
  OutcomeDistribution(const GaussianPropagator& prop, const FockConfiguration& initial, bool linear_ancilla = false);

  int modes() const { return system_; }
  bool linear_ancilla() const { return linear_; }

  double probability(const FockConfiguration& r) const;
  // Probability that modes 0..k-1 read the low k bits of mask.
  double prefix_marginal(std::uint64_t mask, int k) const;
  FockConfiguration sample(std::mt19937_64& rng) const;
  Distribution enumerate() const;
  const std::vector<SkewMatrix>& sectors() const { return sectors_; }

 private:
  int system_ = 0;
  int rows_ = 0;
  bool linear_ = false;
  std::vector<SkewMatrix> sectors_;
};

double extract_probability(Complex pf);

}  // namespace fls

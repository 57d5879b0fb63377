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

#include <cmath>
#include <random>

#include "fls/gaussian.hpp"
#include "fls/model.hpp"
#include "fls/oracle.hpp"
#include "fls/sampler.hpp"

namespace fls::test {

inline RealMatrix hopping(int modes, int i, int j, double J) {
  const auto op = fock_monomial({{FockKind::Create, i}, {FockKind::Annihilate, j}}, modes, J);
  return op.plus(op.adjoint()).a.real();
}

inline RealMatrix random_alpha(int modes, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  RealMatrix a(2 * modes, 2 * modes);
  for (int i = 0; i < 2 * modes; ++i)
    for (int j = 0; j < 2 * modes; ++j) a(i, j) = n(rng);
  return ((a - a.transpose()) / 2.0).eval();
}

inline RealVector random_beta(int modes, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  RealVector b(2 * modes);
  for (int i = 0; i < 2 * modes; ++i) b(i) = n(rng);
  return b;
}

inline LindbladOperator annihilate(int n, int modes, double rate) {
  return fock_operator_as_majorana(FockKind::Annihilate, n, modes).scaled(std::sqrt(rate));
}

inline LindbladOperator create(int n, int modes, double rate) {
  return fock_operator_as_majorana(FockKind::Create, n, modes).scaled(std::sqrt(rate));
}

inline Model make_model(const RealMatrix& alpha, const RealVector& beta, std::vector<LindbladChannel> channels,
                        const std::string& initial, double t) {
  Model m;
  const int modes = static_cast<int>(initial.size());
  m.hamiltonian = QuadraticHamiltonian::constant(alpha, beta, t);
  m.lindblad = LindbladSet(modes, std::move(channels));
  m.initial = FockConfiguration::from_string(initial);
  m.t_final = t;
  return m;
}

// Exact unitary distribution through the Pfaffian sampler.
inline Distribution unitary_distribution(const QuadraticHamiltonian& h, const FockConfiguration& init, double t) {
  const bool linear = h.has_linear_terms();
  const auto hh = linear ? reduce_linear(h) : h;
  return OutcomeDistribution(propagate(hh, 0.0, t), init, linear).enumerate();
}

}  // namespace fls::test

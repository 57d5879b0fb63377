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

#include <numbers>

#include "doctest.h"
#include "helpers.hpp"

using namespace fls;
using namespace fls::test;

namespace {

Model unitary(const RealMatrix& a, const RealVector& b, const std::string& init, double t) {
  return make_model(a, b, {}, init, t);
}

}  // namespace

TEST_SUITE("sampler") {
  TEST_CASE("identity evolution is a point mass") {
    for (int r0 = 0; r0 < 2; ++r0) {
      const auto init = FockConfiguration(1, static_cast<std::uint64_t>(r0));
      const auto d = unitary_distribution(QuadraticHamiltonian::zero(1, 1.0), init, 1.0);
      for (int r = 0; r < 2; ++r) CHECK(std::abs(d.p[static_cast<std::size_t>(r)] - (r == r0 ? 1.0 : 0.0)) < 1e-14);
    }
    std::mt19937_64 rng(1);
    const OutcomeDistribution id(GaussianPropagator::identity(3), FockConfiguration::from_string("101"));
    for (int k = 0; k < 20; ++k) CHECK(id.sample(rng).to_string() == "101");
  }

  TEST_CASE("full hopping transfer") {
    const double J = 1.3, t = std::numbers::pi / (2 * J);
    const auto h = QuadraticHamiltonian::constant(hopping(2, 0, 1, J), RealVector::Zero(4), t);
    const auto d = unitary_distribution(h, FockConfiguration::from_string("10"), t);
    CHECK(std::abs(d.p[0b10] - 1.0) < 1e-10);
  }

  TEST_CASE("number conservation") {
    const int L = 4;
    std::mt19937_64 rng(21);
    RealMatrix a = RealMatrix::Zero(8, 8);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < L; ++i)
      for (int j = i + 1; j < L; ++j) a += hopping(L, i, j, g(rng));
    const auto d = unitary_distribution(QuadraticHamiltonian::constant(a, RealVector::Zero(8), 0.9),
                                        FockConfiguration::from_string("1100"), 0.9);
    for (std::size_t r = 0; r < d.p.size(); ++r)
      if (std::popcount(r) != 2) CHECK(std::abs(d.p[r]) < 1e-10);
  }

  TEST_CASE("matches the dense oracle with pairing and linear terms") {
    std::mt19937_64 rng(33);
    for (int L = 1; L <= 4; ++L)
      for (int lin = 0; lin < 2; ++lin) {
        const RealMatrix a = random_alpha(L, rng, 0.6);
        const RealVector b = lin ? random_beta(L, rng, 0.5) : RealVector::Zero(2 * L);
        std::string init;
        for (int n = 0; n < L; ++n) init += (rng() & 1) ? '1' : '0';
        const Model m = unitary(a, b, init, 0.7);
        const auto d = unitary_distribution(m.hamiltonian, m.initial, 0.7);
        CHECK(oracle::tvd(d, oracle::exact_distribution(m, 0.7)) <= 1e-7);
        CHECK(std::abs(d.total() - 1.0) < 1e-7);
      }
  }

  TEST_CASE("marginals chain to the joint") {
    std::mt19937_64 rng(5);
    const int L = 5;
    const auto h = QuadraticHamiltonian::constant(random_alpha(L, rng), RealVector::Zero(2 * L), 0.5);
    const OutcomeDistribution dist(propagate(h, 0.0, 0.5), FockConfiguration::from_string("10110"));
    const auto joint = dist.enumerate();
    for (int k = 1; k <= L; ++k)
      for (std::uint64_t mask = 0; mask < (1u << k); ++mask) {
        double s = 0.0;
        for (std::uint64_t r = 0; r < joint.p.size(); ++r)
          if ((r & ((1u << k) - 1)) == mask) s += joint.p[r];
        CHECK(std::abs(dist.prefix_marginal(mask, k) - s) < 1e-10);
      }
  }

  TEST_CASE("half transfer sampling frequency") {
    const double J = 1.0, t = std::numbers::pi / 4;
    const auto h = QuadraticHamiltonian::constant(hopping(2, 0, 1, J), RealVector::Zero(4), t);
    const OutcomeDistribution dist(propagate(h, 0.0, t), FockConfiguration::from_string("10"));
    std::mt19937_64 rng(99);
    const int n = 10000;
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += dist.sample(rng).to_string() == "01";
    CHECK(std::abs(hits / double(n) - 0.5) <= 3 * std::sqrt(0.25 / n));
  }

  TEST_CASE("sampler law against enumeration") {
    std::mt19937_64 rng(41);
    const int L = 3;
    const auto h = QuadraticHamiltonian::constant(random_alpha(L, rng), random_beta(L, rng, 0.4), 0.8);
    const auto hh = reduce_linear(h);
    const OutcomeDistribution dist(propagate(hh, 0.0, 0.8), FockConfiguration::from_string("010"), true);
    const auto exact = dist.enumerate();
    const int n = 100000;
    std::vector<double> counts(exact.p.size(), 0.0);
    for (int i = 0; i < n; ++i) counts[dist.sample(rng).mask()] += 1.0;
    double chi2 = 0.0, tv = 0.0;
    int dof = -1;
    for (std::size_t r = 0; r < counts.size(); ++r) {
      tv += 0.5 * std::abs(counts[r] / n - exact.p[r]);
      if (exact.p[r] * n < 5) continue;
      chi2 += std::pow(counts[r] - n * exact.p[r], 2) / (n * exact.p[r]);
      ++dof;
    }
    CHECK(tv <= 0.02);
    // 0.999 quantile of chi-square with 7 degrees of freedom is 24.3
    CHECK(dof <= 7);
    CHECK(chi2 < 24.3);
  }

  TEST_CASE("enumeration limit") {
    const OutcomeDistribution big(GaussianPropagator::identity(15), FockConfiguration(15, 0));
    CHECK_THROWS_AS(big.enumerate(), Error);
  }

  TEST_CASE("probability extraction") {
    CHECK(extract_probability(Complex(0.25, 1e-12)) == 0.25);
    CHECK(extract_probability(Complex(-1e-13, 0.0)) == 0.0);
    CHECK_THROWS_AS(extract_probability(Complex(0.5, 1e-3)), Error);
  }
}

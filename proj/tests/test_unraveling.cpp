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
#include "fls/unraveling.hpp"
#include "helpers.hpp"

using namespace fls;
using namespace fls::test;

namespace {

Distribution averaged(const Model& m, double dt, long n, std::uint64_t seed, int threads = 1) {
  const auto plan = make_plan(m, m.t_final, dt, n, seed);
  RunOptions opts;
  opts.threads = threads;
  opts.estimator = Estimator::Average;
  return run_trajectories(plan, m, opts).mean;
}

UnitaryJump parity_flip(double rate) {
  UnitaryJump y;
  y.rate = rate;
  y.alpha = RealMatrix::Zero(2, 2);
  y.alpha(0, 1) = std::numbers::pi / 2;
  y.alpha(1, 0) = -std::numbers::pi / 2;
  y.beta = RealVector::Zero(2);
  return y;
}

}  // namespace

TEST_SUITE("unraveling") {
  TEST_CASE("counter based streams") {
    auto a = trajectory_rng(7, 3);
    auto b = trajectory_rng(7, 3);
    auto c = trajectory_rng(7, 4);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(splitmix64(0) != splitmix64(1));
  }

  TEST_CASE("zero noise reproduces the Hamiltonian step") {
    std::mt19937_64 rng(2);
    const HamiltonianSegment h{0.0, 1.0, random_alpha(2, rng), RealVector::Zero(4)};
    const auto g = ec1_step_generator(h, {}, {}, 0.1);
    CHECK((g.alpha - h.alpha).cwiseAbs().maxCoeff() < 1e-14);
    Ec1Term term{annihilate(0, 2, 1.0), false, 0};
    const auto g0 = ec1_step_generator(h, {term}, {Complex(0.0)}, 0.1);
    CHECK((g0.alpha - h.alpha).cwiseAbs().maxCoeff() < 1e-14);
  }

  TEST_CASE("number dephasing leaves Fock populations unchanged") {
    const auto n = fock_monomial({{FockKind::Create, 0}, {FockKind::Annihilate, 0}}, 2, 1.0);
    const Model m = make_model(RealMatrix::Zero(4, 4), RealVector::Zero(4), {LindbladChannel::constant(n)}, "10", 1.0);
    CHECK(m.lindblad.class_tag() == ClassTag::EC1);
    const auto d = averaged(m, 0.1, 200, 5);
    CHECK(d.p[0b01] == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("identity jumps and scalar-only operators are trivial") {
    UnitaryJump y;
    y.rate = 2.0;
    y.alpha = RealMatrix::Zero(2, 2);
    y.beta = RealVector::Zero(2);
    Model m = make_model(RealMatrix::Zero(2, 2), RealVector::Zero(2), {LindbladChannel::constant_jump(y)}, "1", 1.0);
    CHECK(averaged(m, 0.05, 100, 1).p[1] == doctest::Approx(1.0));
    m = make_model(RealMatrix::Zero(2, 2), RealVector::Zero(2), {LindbladChannel::constant(LindbladOperator::scalar(1, 0.7))},
                   "1", 1.0);
    CHECK(averaged(m, 0.05, 100, 1).p[1] == doctest::Approx(1.0));
  }

  TEST_CASE("parity flips dephase a hopping pair") {
    // Flips on mode 0 interrupt the transfer; compare with the oracle.
    const double J = 1.0, gamma = 0.5, t = 1.0;
    Model m = make_model(hopping(2, 0, 1, J), RealVector::Zero(4), {}, "10", t);
    UnitaryJump y = parity_flip(gamma);
    RealMatrix a = RealMatrix::Zero(4, 4);
    a.topLeftCorner(2, 2) = y.alpha;
    y.alpha = a;
    y.beta = RealVector::Zero(4);
    m.lindblad = LindbladSet(2, {LindbladChannel::constant_jump(y)});
    CHECK(m.lindblad.class_tag() == ClassTag::EC2);
    const auto exact = oracle::exact_distribution(m, t);
    const auto d = averaged(m, 0.01, 20000, 11);
    CHECK(oracle::tvd(d, exact) < 0.02);
  }

  TEST_CASE("linear loss empties a mode") {
    const double gamma = 1.0, t = 1.0;
    const Model m = make_model(RealMatrix::Zero(2, 2), RealVector::Zero(2),
                               {LindbladChannel::constant(annihilate(0, 1, gamma))}, "1", t);
    const auto d = averaged(m, 0.01, 20000, 17);
    CHECK(std::abs(d.p[1] - std::exp(-gamma * t)) < 0.03);
  }

  TEST_CASE("pair fluctuation instance converges to the oracle") {
    const int L = 4;
    const double g = 0.3, t = 0.5;
    RealMatrix a = RealMatrix::Zero(8, 8);
    for (int i = 0; i + 1 < L; ++i) a += hopping(L, i, i + 1, 1.0);
    std::vector<LindbladChannel> ch;
    for (int i = 0; i + 1 < L; ++i) {
      ch.push_back(LindbladChannel::constant(
          fock_monomial({{FockKind::Annihilate, i}, {FockKind::Annihilate, i + 1}}, L, std::sqrt(g))));
      ch.push_back(LindbladChannel::constant(
          fock_monomial({{FockKind::Create, i + 1}, {FockKind::Create, i}}, L, std::sqrt(g))));
    }
    const Model m = make_model(a, RealVector::Zero(8), std::move(ch), "1100", t);
    CHECK(m.lindblad.class_tag() == ClassTag::EC1);
    const auto d = averaged(m, 0.01, 4000, 23);
    CHECK(oracle::tvd(d, oracle::exact_distribution(m, t)) <= 0.03);
  }

  TEST_CASE("thread count does not change results") {
    const Model m = make_model(hopping(2, 0, 1, 1.0), RealVector::Zero(4),
                               {LindbladChannel::constant(annihilate(0, 2, 0.5)), LindbladChannel::constant(create(1, 2, 0.5))},
                               "10", 1.0);
    const auto plan = make_plan(m, 1.0, 0.05, 600, 99);
    const auto r1 = run_trajectories(plan, m, {1, Estimator::Sample, false});
    const auto r4 = run_trajectories(plan, m, {4, Estimator::Sample, false});
    CHECK(r1.outcomes == r4.outcomes);
    const auto a1 = run_trajectories(plan, m, {1, Estimator::Average, false});
    const auto a3 = run_trajectories(plan, m, {3, Estimator::Average, false});
    CHECK(a1.mean.p == a3.mean.p);
  }

  TEST_CASE("linear operators cannot mix with linear Hamiltonian terms") {
    RealVector beta = RealVector::Zero(2);
    beta(0) = 0.4;
    const Model m = make_model(RealMatrix::Zero(2, 2), beta, {LindbladChannel::constant(annihilate(0, 1, 1.0))}, "1", 1.0);
    CHECK_THROWS_AS(averaged(m, 0.1, 10, 1), Error);
  }

  TEST_CASE("oversized jump step is rejected") {
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(ec2_step_unitary({3.0, 3.0}, 0.0, 0.1, rng), Error);
    const Model m = make_model(RealMatrix::Zero(2, 2), RealVector::Zero(2), {LindbladChannel::constant_jump(parity_flip(10.0))},
                               "1", 1.0);
    try {
      averaged(m, 0.1, 10, 1);
      FAIL("expected StepTooLarge");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::StepTooLarge);
    }
  }

  TEST_CASE("invalid plans") {
    const Model m = make_model(RealMatrix::Zero(2, 2), RealVector::Zero(2), {}, "1", 1.0);
    CHECK_THROWS_AS(make_plan(m, 1.0, 0.0, 10, 1), Error);
    CHECK_THROWS_AS(make_plan(m, 1.0, 0.1, 0, 1), Error);
  }
}

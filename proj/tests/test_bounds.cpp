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

#include "doctest.h"
#include "fls/bounds.hpp"
#include "helpers.hpp"

using namespace fls;
using namespace fls::test;

namespace {

Model ec1_pair(double gamma) {
  return make_model(hopping(2, 0, 1, 1.0), RealVector::Zero(4),
                    {LindbladChannel::constant(annihilate(0, 2, gamma)), LindbladChannel::constant(create(0, 2, gamma)),
                     LindbladChannel::constant(annihilate(1, 2, gamma)), LindbladChannel::constant(create(1, 2, gamma))},
                    "10", 1.0);
}

Model ec2_flip(double rate) {
  UnitaryJump y;
  y.rate = rate;
  y.alpha = RealMatrix::Zero(4, 4);
  y.alpha(0, 1) = 1.0;
  y.alpha(1, 0) = -1.0;
  y.beta = RealVector::Zero(4);
  return make_model(hopping(2, 0, 1, 1.0), RealVector::Zero(4), {LindbladChannel::constant_jump(y)}, "10", 1.0);
}

Model ec3_loss(double gamma) {
  return make_model(hopping(2, 0, 1, 1.0), RealVector::Zero(4), {LindbladChannel::constant(annihilate(0, 2, gamma))}, "10",
                    1.0);
}

}  // namespace

TEST_SUITE("bounds") {
  TEST_CASE("closed systems have no correction") {
    const Model m = make_model(hopping(2, 0, 1, 1.0), RealVector::Zero(4), {}, "10", 1.0);
    CHECK(correction_integral(m, 1.0) == 0.0);
    CHECK(error_bound(m, 1.0, 0.1) == 0.0);
  }

  TEST_CASE("vanishing jump rate gives no correction") {
    CHECK(error_bound(ec2_flip(0.0), 1.0, 0.1) == doctest::Approx(0.0));
    CHECK(error_bound(ec2_flip(1.0), 1.0, 0.1) > 0.0);
  }

  TEST_CASE("triangle norms dominate dense norms") {
    for (const Model& m : {ec1_pair(0.25), ec2_flip(0.7), ec3_loss(0.6)}) {
      const auto prof = correction_norms(m, 0.5, true);
      REQUIRE(prof.has_dense);
      CHECK(!prof.terms.empty());
      for (const auto& term : prof.terms) {
        CHECK(term.dense1 <= term.norm1 * (1 + 1e-9) + 1e-12);
        CHECK(term.dense2 <= term.norm2 * (1 + 1e-9) + 1e-12);
      }
      CHECK(prof.dense_weight() <= prof.weight() * (1 + 1e-9));
    }
  }

  TEST_CASE("bound is linear in the step") {
    const Model m = ec1_pair(0.25);
    const double e1 = error_bound(m, 1.0, 0.01), e2 = error_bound(m, 1.0, 0.02);
    CHECK(e2 == doctest::Approx(2 * e1).epsilon(1e-12));
    const auto r = bound_report(m, 1.0, 0.01);
    CHECK(r.prefactor == doctest::Approx(std::pow(hamming_ball(2, r.k_m), 2)));
    CHECK(r.epsilon == doctest::Approx(0.5 * r.prefactor * r.integral * 0.01));
    CHECK_THROWS_AS(bound_report(m, 1.0, 0.0), Error);
  }

  TEST_CASE("hamming ball counts") {
    CHECK(hamming_ball(4, 0) == 1.0);
    CHECK(hamming_ball(4, 1) == 5.0);
    CHECK(hamming_ball(4, 2) == 11.0);
    CHECK(hamming_ball(2, 4) == 4.0);
  }

  TEST_CASE("chosen step meets the target") {
    for (const Model& m : {ec1_pair(0.25), ec2_flip(0.7), ec3_loss(0.6)}) {
      for (double eps : {0.2, 0.05}) {
        const double dt = choose_dt(m, 1.0, eps);
        CHECK(dt > 0.0);
        CHECK(error_bound(m, 1.0, dt) <= eps * (1 + 1e-9));
        const double steps = 1.0 / dt;
        CHECK(std::abs(steps - std::round(steps)) < 1e-6);
      }
      CHECK(choose_dt(m, 1.0, 0.025) <= 0.5 * choose_dt(m, 1.0, 0.05) * (1 + 1e-9) + 1.0 / 4096);
    }
    CHECK(choose_dt(ec1_pair(0.25), 1.0, 0.1) == doctest::Approx(0.003125));
  }

  TEST_CASE("infeasible targets") {
    CHECK_THROWS_AS(choose_dt(ec1_pair(0.25), 1.0, 1e-14), Error);
    CHECK_THROWS_AS(choose_dt(ec1_pair(0.25), 1.0, 1.5), Error);
  }

  TEST_CASE("runtime model scaling") {
    const auto a = runtime_estimate(8, 1.0, 0.1, 10);
    const auto b = runtime_estimate(16, 1.0, 0.1, 10);
    CHECK(a.per_trajectory == doctest::Approx(8.0 * 8 * 8 * 8 + 8.0 * 8 * 8 * 10));
    CHECK(b.per_trajectory / a.per_trajectory > 8.0);
    CHECK(a.total == doctest::Approx(10 * a.per_trajectory));
    const auto c = runtime_estimate(8, 1.0, 0.1, 1, true);
    CHECK(c.effective_modes == doctest::Approx(18.0));
  }
}

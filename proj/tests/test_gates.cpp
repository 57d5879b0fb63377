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
#include "fls/gates.hpp"

using namespace fls;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("gates") {
  TEST_CASE("Zeno gate leaves unblocked states intact") {
    GateSpec s;
    s.Gamma = 100.0;
    const auto r = simulate_cz(s, GateScheme::Zeno);
    for (int a : {1, 2}) {
      CHECK(std::abs(r.survival[static_cast<std::size_t>(a)] - 1.0) < 1e-8);
      CHECK(r.leakage[static_cast<std::size_t>(a)] < 1e-8);
    }
    CHECK(std::abs(std::abs(r.phase_11) - kPi) < 1e-6);
    CHECK(r.fidelity_11 > 1.0 - 10.0 / s.Gamma);
    CHECK(r.blocked_state == 0);
    // leakage of the blocked state is close to 2 pi / gamma in the epsilon convention
    CHECK(r.epsilon == doctest::Approx(2 * kPi / s.Gamma).epsilon(0.25));
    CHECK(r.average_fidelity <= 1.0 + 1e-12);
  }

  TEST_CASE("non-Hermitian leakage formulas") {
    GateSpec s;
    s.Gamma = 200.0;
    const auto two = leakage_nonhermitian(s, LeakageModel::TwoLevel);
    CHECK(two.epsilon == doctest::Approx(2 * kPi / 200.0).epsilon(0.2));
    CHECK(two.survival == doctest::Approx(1.0 - 2 * two.epsilon));
    GateSpec f;
    f.Gamma = 1000.0;
    f.zeta = 1.0;
    const auto four = leakage_nonhermitian(f, LeakageModel::FourLevel);
    const double gt = f.Gamma * f.duration();
    CHECK(1.0 - four.survival == doctest::Approx((8 * kPi * kPi / gt) / 5.0).epsilon(0.2));
  }

  TEST_CASE("optimal error at the reference point") {
    GateSpec s;
    s.Gamma = 2.5e4;
    s.Gamma_prime = 1e-2;
    const auto o = optimal_time(s);
    CHECK(o.epsilon == doctest::Approx(7.94767061264e-3).epsilon(1e-6));
    GateSpec at = s;
    at.t = o.t;
    CHECK(total_error(at) == doctest::Approx(o.epsilon).epsilon(1e-12));
    for (double f : {0.5, 0.9, 1.1, 2.0}) {
      at.t = f * o.t;
      CHECK(total_error(at) > o.epsilon);
    }
    s.zeta = 2.0;
    CHECK(optimal_time(s).epsilon < o.epsilon);
  }

  TEST_CASE("hardness diagram") {
    CHECK(min_gate_error(1.0) == doctest::Approx(std::sqrt(8.0) * kPi));
    CHECK(min_gate_error(1e-4) == doctest::Approx(min_gate_error(1e4)));
    const double p0 = 0.1;
    const double edge = p0 * p0 / (8 * kPi * kPi);
    CHECK(hardness_point(1.0, p0).label == "EC1-easy");
    CHECK(hardness_point(edge * 0.5, p0).label == "hard");
    CHECK(hardness_point(edge * 2.0, p0).label == "inconclusive");
    CHECK(hardness_point(2.0 / edge, p0).label == "hard");
    CHECK(hardness_point(edge, p0).epsilon == doctest::Approx(p0));
    const auto sweep = sweep_hardness_diagram(1e-6, 1e6, 10, p0);
    bool has_one = false;
    for (const auto& h : sweep) has_one |= h.label == "EC1-easy";
    CHECK(has_one);
    CHECK_THROWS_AS(hardness_point(0.1, 1.5), Error);
  }

  TEST_CASE("table evaluation and validation") {
    const auto rows = optimal_error_table({{{1.0, 2.5e4, 0.0}, {2.0, 2.5e4, 1.0}}}, 1e-2, 0.0);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].epsilon < rows[0].epsilon);
    CHECK(parse_gate_scheme("atom2") == GateScheme::Atom2);
    CHECK_THROWS_AS(parse_gate_scheme("nope"), Error);
    GateSpec bad;
    bad.Gamma = -1.0;
    CHECK_THROWS_AS(bad.validate(), Error);
  }
}

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

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "helpers.hpp"

using namespace fls;
using namespace fls::test;

TEST_SUITE("gaussian") {
  TEST_CASE("zero generator gives the identity") {
    const auto p = propagate(QuadraticHamiltonian::zero(3, 1.0), 0.0, 1.0);
    CHECK((p.R - RealMatrix::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
    const ComplexMatrix t = p.T();
    for (int n = 0; n < 3; ++n)
      for (int j = 0; j < 6; ++j) {
        const Complex expect = j == 2 * n ? Complex(1.0) : j == 2 * n + 1 ? Complex(0.0, 1.0) : Complex(0.0);
        CHECK(std::abs(t(n, j) - expect) == 0.0);
      }
  }

  TEST_CASE("orthogonality and composition") {
    std::mt19937_64 rng(4);
    for (int modes = 1; modes <= 5; ++modes) {
      HamiltonianSegment s0{0.0, 0.4, random_alpha(modes, rng), RealVector::Zero(2 * modes)};
      HamiltonianSegment s1{0.4, 1.3, random_alpha(modes, rng), RealVector::Zero(2 * modes)};
      const QuadraticHamiltonian h(modes, {s0, s1});
      const auto full = propagate(h, 0.0, 1.3);
      const auto a = propagate(h, 0.0, 0.7);
      const auto b = propagate(h, 0.7, 1.3);
      CHECK(full.orthogonality_error() <= 1e-9);
      CHECK((a.then(b).R - full.R).cwiseAbs().maxCoeff() <= 1e-8);
      CHECK((full.then(full.inverse()).R - RealMatrix::Identity(2 * modes, 2 * modes)).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }

  TEST_CASE("propagator conjugates Majoranas like the dense unitary") {
    std::mt19937_64 rng(8);
    const int modes = 3;
    const HamiltonianSegment s{0.0, 0.8, random_alpha(modes, rng), RealVector::Zero(2 * modes)};
    const auto p = propagate(QuadraticHamiltonian(modes, {s}), 0.0, 0.8);
    const ComplexMatrix u = (Complex(0.0, -0.8) * oracle::realize(s)).exp();
    for (int i = 0; i < 2 * modes; ++i) {
      ComplexMatrix rhs = ComplexMatrix::Zero(8, 8);
      for (int j = 0; j < 2 * modes; ++j) rhs += p.R(i, j) * oracle::majorana_dense(j, modes);
      CHECK((u * oracle::majorana_dense(i, modes) * u.adjoint() - rhs).cwiseAbs().maxCoeff() < 1e-9);
    }
  }

  TEST_CASE("hopping transfer follows the Rabi formula") {
    const double J = 0.9;
    for (double t : {0.3, 0.8, std::numbers::pi / (2 * J)}) {
      const auto h = QuadraticHamiltonian::constant(hopping(2, 0, 1, J), RealVector::Zero(4), t);
      const auto d = unitary_distribution(h, FockConfiguration::from_string("10"), t);
      CHECK(std::abs(d.p[0b10] - std::pow(std::sin(J * t), 2)) < 1e-10);
    }
  }

  TEST_CASE("linear terms reduce to an ancilla coupling") {
    std::mt19937_64 rng(12);
    const int modes = 2;
    const HamiltonianSegment s{0.0, 1.0, random_alpha(modes, rng), RealVector::Zero(4)};
    const auto r = reduce_linear(s);
    CHECK(r.alpha.rows() == 6);
    CHECK(r.alpha.topLeftCorner(4, 4) == s.alpha);
    CHECK(r.alpha.rightCols(2).cwiseAbs().maxCoeff() == 0.0);
    HamiltonianSegment sb{0.0, 1.0, random_alpha(modes, rng), random_beta(modes, rng)};
    const auto rb = reduce_linear(sb);
    CHECK((rb.alpha + rb.alpha.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("single Majorana drive matches the dense evolution") {
    RealVector beta = RealVector::Zero(2);
    beta(0) = 1.0;
    const double t = 0.7;
    const auto h = QuadraticHamiltonian::constant(RealMatrix::Zero(2, 2), beta, t);
    const auto init = FockConfiguration::from_string("0");
    const auto pf = unitary_distribution(h, init, t);
    Model m;
    m.hamiltonian = h;
    m.lindblad = LindbladSet(1, {});
    m.initial = init;
    m.t_final = t;
    const auto exact = oracle::exact_distribution(m, t);
    CHECK(oracle::tvd(pf, exact) <= 1e-8);
    CHECK(std::abs(exact.p[1] - std::pow(std::sin(t), 2)) < 1e-8);
  }
}

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
#include "helpers.hpp"

using namespace fls;
using namespace fls::test;
using namespace fls::oracle;

TEST_SUITE("oracle") {
  TEST_CASE("single mode Majoranas are Pauli matrices") {
    const auto g0 = majorana_dense(0, 1);
    const auto g1 = majorana_dense(1, 1);
    CHECK(g0(0, 1) == Complex(1.0));
    CHECK(g0(1, 0) == Complex(1.0));
    CHECK(std::abs(g1(0, 1) - Complex(0.0, -1.0)) == 0.0);
    CHECK(std::abs(g1(1, 0) - Complex(0.0, 1.0)) == 0.0);
  }

  TEST_CASE("canonical anticommutation relations") {
    for (int modes = 1; modes <= 5; ++modes) {
      const Eigen::Index dim = Eigen::Index{1} << modes;
      for (int i = 0; i < 2 * modes; ++i)
        for (int j = 0; j < 2 * modes; ++j) {
          const auto gi = majorana_dense(i, modes);
          const auto gj = majorana_dense(j, modes);
          const ComplexMatrix ac = gi * gj + gj * gi;
          const ComplexMatrix expect = (i == j ? 2.0 : 0.0) * ComplexMatrix::Identity(dim, dim);
          CHECK((ac - expect).cwiseAbs().maxCoeff() == 0.0);
        }
    }
    CHECK_THROWS_AS(majorana_dense(0, kMaxOperatorModes + 1), Error);
  }

  TEST_CASE("number operator is diagonal in the occupation") {
    const auto n1 = number_dense(1, 3);
    for (Eigen::Index r = 0; r < 8; ++r) CHECK(n1(r, r) == Complex(((r >> 1) & 1) ? 1.0 : 0.0));
  }

  TEST_CASE("single mode decay") {
    const double gamma = 0.8, t = 1.5;
    const Model m = make_model(RealMatrix::Zero(2, 2), RealVector::Zero(2),
                               {LindbladChannel::constant(annihilate(0, 1, gamma))}, "1", t);
    const auto rho = lindblad_evolve(DenseState::fock(m.initial), m, t);
    const auto d = measure_distribution(rho);
    CHECK(std::abs(d.p[1] - std::exp(-gamma * t)) < 1e-7);
    CHECK(rho.trace_error() < 1e-8);
    CHECK(rho.min_eigenvalue() > -1e-7);
  }

  TEST_CASE("unitary evolution against the matrix exponential") {
    std::mt19937_64 rng(3);
    const int modes = 3;
    const Model m = make_model(random_alpha(modes, rng), random_beta(modes, rng, 0.3), {}, "100", 0.9);
    const auto d = exact_distribution(m, 0.9);
    const auto pf = unitary_distribution(m.hamiltonian, m.initial, 0.9);
    CHECK(tvd(d, pf) < 1e-7);
  }

  TEST_CASE("dephasing kills coherence but keeps populations") {
    const double gamma = 0.5, t = 1.0;
    const auto n = fock_monomial({{FockKind::Create, 0}, {FockKind::Annihilate, 0}}, 1, std::sqrt(gamma));
    const Model m = make_model(RealMatrix::Zero(2, 2), RealVector::Zero(2), {LindbladChannel::constant(n)}, "0", t);
    DenseState plus;
    plus.basis = Basis::full(1);
    plus.rho = ComplexMatrix::Constant(2, 2, 0.5);
    const auto rho = lindblad_evolve(plus, m, t);
    CHECK(std::abs(rho.rho(0, 0) - 0.5) < 1e-8);
    CHECK(std::abs(rho.rho(0, 1) - 0.5 * std::exp(-gamma * t / 2)) < 1e-7);
  }

  TEST_CASE("reference distributions") {
    const auto pm = measure_distribution(DenseState::fock(FockConfiguration::from_string("011")));
    CHECK(pm.p[0b110] == doctest::Approx(1.0));
    const auto mm = measure_distribution(DenseState::maximally_mixed(3));
    for (double p : mm.p) CHECK(p == doctest::Approx(0.125));
  }

  TEST_CASE("total variation distance") {
    Distribution p{1, {0.75, 0.25}}, q{1, {0.5, 0.5}};
    CHECK(tvd(p, q) == doctest::Approx(0.25));
    CHECK(tvd(p, p) == 0.0);
    CHECK(tvd(Distribution{1, {1.0, 0.0}}, Distribution{1, {0.0, 1.0}}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(tvd(p, Distribution{2, {1, 0, 0, 0}}), Error);
  }

  TEST_CASE("particle number sectors") {
    const auto b = Basis::particle_numbers(4, {2});
    CHECK(b.size() == 6);
    CHECK(b.index_of(0b0011) >= 0);
    CHECK(b.index_of(0b0111) == -1);
  }

  TEST_CASE("sparse operator lemma") {
    const auto rho = DenseState::maximally_mixed(3);
    const auto id = ComplexMatrix::Identity(8, 8).eval();
    auto c = verify_sparse_lemma(id, 0, id, 0, rho);
    CHECK(c.lhs == doctest::Approx(1.0));
    CHECK(c.bound == doctest::Approx(1.0));
    c = verify_sparse_lemma(majorana_dense(0, 3), 1, majorana_dense(1, 3), 1, rho);
    CHECK(c.bound == doctest::Approx(9.0));
    CHECK(c.holds);
    CHECK(flip_locality(Monomial{{0, 1}, 1.0}) == 0);
    CHECK(flip_locality(Monomial{{0, 2, 5}, 1.0}) == 3);
  }
}

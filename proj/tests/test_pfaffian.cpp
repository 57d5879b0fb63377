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

#include <random>

#include "doctest.h"
#include "fls/pfaffian.hpp"

using namespace fls;

namespace {

ComplexMatrix random_skew(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return (a - a.transpose()).eval();
}

}  // namespace

TEST_SUITE("pfaffian") {
  TEST_CASE("two by two") {
    ComplexMatrix a(2, 2);
    a << 0.0, Complex(1.5, -2.0), -Complex(1.5, -2.0), 0.0;
    CHECK(std::abs(pfaffian(SkewMatrix(a)) - Complex(1.5, -2.0)) < 1e-15);
  }

  TEST_CASE("four by four closed form") {
    std::mt19937_64 rng(7);
    const ComplexMatrix a = random_skew(4, rng);
    const Complex expect = a(0, 1) * a(2, 3) - a(0, 2) * a(1, 3) + a(0, 3) * a(1, 2);
    CHECK(std::abs(pfaffian(SkewMatrix(a)) - expect) < 1e-12);
  }

  TEST_CASE("square equals determinant") {
    std::mt19937_64 rng(11);
    for (int n : {2, 4, 6, 8, 12}) {
      const ComplexMatrix a = random_skew(n, rng);
      const Complex pf = pfaffian(SkewMatrix(a));
      const Complex det = a.determinant();
      CHECK(std::abs(pf * pf - det) <= 1e-8 * std::abs(det));
    }
  }

  TEST_CASE("odd size vanishes") {
    std::mt19937_64 rng(3);
    ComplexMatrix a = random_skew(5, rng);
    CHECK(std::abs(pfaffian(SkewMatrix(a))) == 0.0);
  }

  TEST_CASE("submatrix selection") {
    std::mt19937_64 rng(5);
    const SkewMatrix a(random_skew(4, rng));
    CHECK(pfaffian_submatrix(a, {}) == Complex(1.0));
    CHECK(std::abs(pfaffian_submatrix(a, {0, 1, 2, 3}) - pfaffian(a)) < 1e-14);
    CHECK(std::abs(pfaffian_submatrix(a, {0, 1}) - a(0, 1)) < 1e-15);
    CHECK(pfaffian_submatrix(a, {0, 2, 3}) == Complex(0.0));
    CHECK_THROWS(pfaffian_submatrix(a, {1, 0}));
    CHECK_THROWS(pfaffian_submatrix(a, {0, 4}));
  }

  TEST_CASE("zero pivot column is handled") {
    ComplexMatrix a = ComplexMatrix::Zero(4, 4);
    a(0, 3) = 2.0;
    a(3, 0) = -2.0;
    a(1, 2) = 3.0;
    a(2, 1) = -3.0;
    // Pf = a03 a12 (sign + from the closed form)
    CHECK(std::abs(pfaffian(SkewMatrix(a)) - Complex(6.0)) < 1e-14);
    CHECK(std::abs(pfaffian(SkewMatrix(ComplexMatrix::Zero(6, 6)))) == 0.0);
  }

  TEST_CASE("congruence rule") {
    std::mt19937_64 rng(19);
    std::normal_distribution<double> g(0.0, 1.0);
    const ComplexMatrix a = random_skew(6, rng);
    ComplexMatrix b(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) b(i, j) = Complex(g(rng), g(rng));
    const Complex lhs = pfaffian(SkewMatrix(b * a * b.transpose()));
    const Complex rhs = b.determinant() * pfaffian(SkewMatrix(a));
    CHECK(std::abs(lhs - rhs) <= 1e-7 * std::abs(rhs));
  }
}

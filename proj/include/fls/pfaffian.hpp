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

#include <vector>

#include "fls/core.hpp"

namespace fls {

// Complex skew-symmetric matrix. Input is antisymmetrized on construction.
class SkewMatrix {
 public:
  SkewMatrix() = default;
  explicit SkewMatrix(const ComplexMatrix& a);

  int size() const { return static_cast<int>(a_.rows()); }
  const ComplexMatrix& matrix() const { return a_; }
  Complex operator()(int i, int j) const { return a_(i, j); }

 private:
  ComplexMatrix a_;
};

// Parlett-Reid elimination with partial pivoting. Destroys its argument.
Complex pfaffian_inplace(ComplexMatrix& a);

Complex pfaffian(const SkewMatrix& a);
Complex pfaffian_submatrix(const SkewMatrix& a, const std::vector<int>& idx);

}  // namespace fls

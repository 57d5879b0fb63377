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

#include "fls/pfaffian.hpp"

#include <cmath>

namespace fls {

SkewMatrix::SkewMatrix(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::InvalidArgument, "skew matrix must be square");
  a_ = (a - a.transpose()) / 2.0;
}

Complex pfaffian_inplace(ComplexMatrix& a) {
  const Eigen::Index n = a.rows();
  if (n % 2 == 1) return 0.0;
  Complex pf = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index rel;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&rel);
    const Eigen::Index kp = k + 1 + rel;
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    const Complex piv = a(k, k + 1);
    if (piv == Complex(0.0)) return 0.0;
    pf *= piv;
    const Eigen::Index m = n - k - 2;
    if (m > 0) {
      // Gauss transform eliminating row/column k against pivot column k+1.
      ComplexVector tau = a.row(k).tail(m).transpose() / piv;
      ComplexVector u = a.col(k + 1).tail(m);
      a.bottomRightCorner(m, m).noalias() += tau * u.transpose();
      a.bottomRightCorner(m, m).noalias() -= u * tau.transpose();
    }
  }
  return pf;
}

Complex pfaffian(const SkewMatrix& a) {
  ComplexMatrix work = a.matrix();
  return pfaffian_inplace(work);
}

Complex pfaffian_submatrix(const SkewMatrix& a, const std::vector<int>& idx) {
  const int n = static_cast<int>(idx.size());
  for (int i = 0; i < n; ++i) {
    if (idx[i] < 0 || idx[i] >= a.size()) throw Error(ErrorCode::InvalidArgument, "Pfaffian index out of range");
    if (i > 0 && idx[i] <= idx[i - 1])
      throw Error(ErrorCode::InvalidArgument, "Pfaffian index list must be strictly increasing");
  }
  if (n % 2 == 1) return 0.0;
  ComplexMatrix sub(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sub(i, j) = a(idx[i], idx[j]);
  return pfaffian_inplace(sub);
}

}  // namespace fls

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

#include "fls/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace fls {

GaussianPropagator GaussianPropagator::identity(int modes, double t) {
  return {RealMatrix::Identity(2 * modes, 2 * modes), t, t};
}

ComplexMatrix GaussianPropagator::T() const {
  const int l = modes();
  ComplexMatrix t(l, 2 * l);
  for (int n = 0; n < l; ++n)
    for (int j = 0; j < 2 * l; ++j) t(n, j) = Complex(R(2 * n, j), R(2 * n + 1, j));
  return t;
}

GaussianPropagator GaussianPropagator::then(const GaussianPropagator& later) const {
  return {R * later.R, t0, later.t1};
}

GaussianPropagator GaussianPropagator::inverse() const { return {R.transpose(), t1, t0}; }

double GaussianPropagator::orthogonality_error() const {
  return (R.transpose() * R - RealMatrix::Identity(R.rows(), R.cols())).cwiseAbs().maxCoeff();
}

HamiltonianSegment reduce_linear(const HamiltonianSegment& seg) {
  const auto n = seg.alpha.rows();
  HamiltonianSegment out{seg.t_start, seg.t_end, RealMatrix::Zero(n + 2, n + 2), RealVector::Zero(n + 2)};
  out.alpha.topLeftCorner(n, n) = seg.alpha;
  out.alpha.row(n).head(n) = seg.beta.transpose();
  out.alpha.col(n).head(n) = -seg.beta;
  return out;
}

QuadraticHamiltonian reduce_linear(const QuadraticHamiltonian& h) {
  std::vector<HamiltonianSegment> segs;
  for (const auto& s : h.segments()) segs.push_back(reduce_linear(s));
  return QuadraticHamiltonian(h.modes() + 1, std::move(segs));
}

HamiltonianSegment embed_segment(const HamiltonianSegment& seg, int modes) {
  const auto n = seg.alpha.rows();
  HamiltonianSegment out{seg.t_start, seg.t_end, RealMatrix::Zero(2 * modes, 2 * modes), RealVector::Zero(2 * modes)};
  out.alpha.topLeftCorner(n, n) = seg.alpha;
  out.beta.head(n) = seg.beta;
  return out;
}

RealMatrix rotation_exp(const RealMatrix& alpha, double dt) {
  const RealMatrix g = (-2.0 * dt) * alpha;
  return g.exp();
}

double default_dt_max(const QuadraticHamiltonian& h, double t0, double t1) {
  const double span = t1 - t0;
  if (span <= 0.0) return 1.0;
  const double steps = std::max(64.0, std::ceil(h.max_alpha_norm() * span * 16.0));
  return span / steps;
}

GaussianPropagator propagate(const QuadraticHamiltonian& h, double t0, double t1, double dt_max) {
  if (t1 < t0) throw Error(ErrorCode::InvalidArgument, "propagate needs t1 >= t0");
  if (h.has_linear_terms()) throw Error(ErrorCode::InvalidArgument, "propagate needs beta = 0; apply reduce_linear first");
  if (dt_max <= 0.0) dt_max = default_dt_max(h, t0, t1);
  GaussianPropagator out = GaussianPropagator::identity(h.modes(), t0);
  out.t1 = t1;
  std::vector<double> cuts{t0};
  for (double b : h.breakpoints(t0, t1)) cuts.push_back(b);
  cuts.push_back(t1);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (b <= a) continue;
    const auto& seg = h.segment_at(0.5 * (a + b));
    const auto n = static_cast<long>(std::ceil((b - a) / dt_max - 1e-9));
    const RealMatrix step = rotation_exp(seg.alpha, (b - a) / static_cast<double>(n));
    for (long s = 0; s < n; ++s) out.R = out.R * step;
  }
  return out;
}

}  // namespace fls

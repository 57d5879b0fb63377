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

#include "fls/core.hpp"
#include "fls/model.hpp"

namespace fls {

// Real orthogonal R with U g_i U^dagger = sum_j R_ij g_j.
struct GaussianPropagator {
  RealMatrix R;
  double t0 = 0.0;
  double t1 = 0.0;

  static GaussianPropagator identity(int modes, double t = 0.0);

  int modes() const { return static_cast<int>(R.rows() / 2); }
  double duration() const { return t1 - t0; }
  // T_nj = R_{2n,j} + i R_{2n+1,j}.
  ComplexMatrix T() const;
  // Propagator of this evolution followed by `later`.
  GaussianPropagator then(const GaussianPropagator& later) const;
  GaussianPropagator inverse() const;
  double orthogonality_error() const;
};

// Generator with the linear terms absorbed by an extra mode. The ancilla mode is
// the last one, Majorana indices 2L and 2L+1, and only 2L couples.
HamiltonianSegment reduce_linear(const HamiltonianSegment& seg);
QuadraticHamiltonian reduce_linear(const QuadraticHamiltonian& h);
// Embeds a segment acting on `modes` into a larger mode count, zero padded.
HamiltonianSegment embed_segment(const HamiltonianSegment& seg, int modes);

// exp(-2 alpha dt) for a constant antisymmetric alpha.
RealMatrix rotation_exp(const RealMatrix& alpha, double dt);

double default_dt_max(const QuadraticHamiltonian& h, double t0, double t1);

// Ordered product of sub-step exponentials. dt_max <= 0 selects default_dt_max.
GaussianPropagator propagate(const QuadraticHamiltonian& h, double t0, double t1, double dt_max = 0.0);

}  // namespace fls

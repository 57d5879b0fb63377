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
#include "fls/model.hpp"

namespace fls::oracle {

inline constexpr int kMaxOperatorModes = 12;
inline constexpr int kMaxEvolveModes = 10;

using DenseOperator = ComplexMatrix;

// Jordan-Wigner Majorana on 2^L states; mode n is bit n of the basis index.
DenseOperator majorana_dense(int i, int modes);
DenseOperator number_dense(int n, int modes);
DenseOperator realize(const LindbladOperator& op);
DenseOperator realize(const HamiltonianSegment& seg);
// sqrt(rate) exp(-i G).
DenseOperator realize(const UnitaryJump& jump);

// Fock basis subset with a lookup from mask to position.
struct Basis {
  int modes = 0;
  std::vector<std::uint64_t> states;

  static Basis full(int modes);
  static Basis particle_numbers(int modes, const std::vector<int>& numbers);
  std::size_t size() const { return states.size(); }
  bool is_full() const { return states.size() == (std::size_t{1} << modes); }
  long index_of(std::uint64_t mask) const;
};

// Restricts an operator on the full space to the basis. Throws when the
// operator moves weight out of the subspace by more than tol.
DenseOperator restrict_to(const DenseOperator& full, const Basis& basis, double tol = 1e-10);

struct DensePiece {
  double t_start = 0.0;
  double t_end = 0.0;
  DenseOperator h;
  std::vector<DenseOperator> jumps;
};

struct DenseLindbladian {
  Basis basis;
  std::vector<DensePiece> pieces;
};

DenseLindbladian dense_lindbladian(const Model& model, double t_final);
DenseLindbladian dense_lindbladian(const Model& model, double t_final, const Basis& basis);

struct DenseState {
  Basis basis;
  ComplexMatrix rho;

  static DenseState fock(const Basis& basis, std::uint64_t mask);
  static DenseState fock(const FockConfiguration& r);
  static DenseState maximally_mixed(int modes);
  double trace_error() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;
};

struct EvolveOptions {
  double rtol = 1e-8;
  double atol = 1e-12;
  // Skip symmetrization and state checks; used when propagating operator inputs like |i><j|.
  bool operator_input = false;
};

ComplexMatrix apply_lindbladian(const DensePiece& piece, const ComplexMatrix& rho);
DenseState lindblad_evolve(const DenseState& rho0, const DenseLindbladian& lindbladian, double t0, double t1,
                           const EvolveOptions& opts = {});
DenseState lindblad_evolve(const DenseState& rho0, const Model& model, double t, const EvolveOptions& opts = {});

Distribution measure_distribution(const DenseState& state);
double tvd(const Distribution& p, const Distribution& q);

// Distribution of the exact dynamics from the model's initial configuration.
Distribution exact_distribution(const Model& model, double t);

// Majorana monomial coef * g_{i1} ... g_{ik} and the number of modes it flips.
struct Monomial {
  std::vector<int> indices;
  Complex coef = 1.0;
};
DenseOperator realize(const Monomial& m, int modes);
int flip_locality(const Monomial& m);

struct LemmaCheck {
  double lhs = 0.0;
  double bound = 0.0;
  bool holds = true;
};
LemmaCheck verify_sparse_lemma(const DenseOperator& o1, int k1, const DenseOperator& o2, int k2, const DenseState& rho);

}  // namespace fls::oracle

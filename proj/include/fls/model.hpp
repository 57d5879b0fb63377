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

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fls/core.hpp"

namespace fls {

inline constexpr double kForever = std::numeric_limits<double>::infinity();

// H = (i/2) sum alpha_ij g_i g_j + sum beta_i g_i on one time interval.
struct HamiltonianSegment {
  double t_start = 0.0;
  double t_end = 0.0;
  RealMatrix alpha;
  RealVector beta;
};

class QuadraticHamiltonian {
 public:
  QuadraticHamiltonian() = default;
  QuadraticHamiltonian(int modes, std::vector<HamiltonianSegment> segments);

  static QuadraticHamiltonian constant(const RealMatrix& alpha, const RealVector& beta, double t_end);
  static QuadraticHamiltonian zero(int modes, double t_end);

  int modes() const { return modes_; }
  const std::vector<HamiltonianSegment>& segments() const { return segments_; }
  double t_final() const;
  bool has_linear_terms() const;
  double max_alpha_norm() const;

  // Segment covering t. Segments are half open except the last one.
  const HamiltonianSegment& segment_at(double t) const;
  // Segment boundaries strictly inside (t0, t1).
  std::vector<double> breakpoints(double t0, double t1) const;

 private:
  int modes_ = 0;
  std::vector<HamiltonianSegment> segments_;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> issues;

  void fail(std::string issue) {
    ok = false;
    issues.push_back(std::move(issue));
  }
  std::string summary() const;
};

ValidationReport validate_hamiltonian(const QuadraticHamiltonian& h);

// A = (i/2) sum a_ij g_i g_j + sum b_i g_i + d with a antisymmetric.
struct LindbladOperator {
  ComplexMatrix a;
  ComplexVector b;
  Complex d = 0.0;

  static LindbladOperator make(const ComplexMatrix& a_raw, const ComplexVector& b, Complex d);
  static LindbladOperator zero(int modes);
  static LindbladOperator scalar(int modes, Complex d);

  int modes() const { return static_cast<int>(b.size() / 2); }
  LindbladOperator adjoint() const;
  LindbladOperator scaled(Complex z) const;
  LindbladOperator plus(const LindbladOperator& o) const;
  bool is_linear(double tol = 1e-12) const;
  bool is_hermitian(double tol = 1e-12) const;
  bool is_finite() const;
};

enum class FockKind { Create, Annihilate };

LindbladOperator fock_operator_as_majorana(FockKind kind, int n, int modes);
// Product x*y of two operators whose quadratic parts vanish.
LindbladOperator majorana_product(const LindbladOperator& x, const LindbladOperator& y);
// Coefficient times an ordered product of at most two Fock operators.
LindbladOperator fock_monomial(const std::vector<std::pair<FockKind, int>>& factors, int modes, Complex coef);

// EC2 channel data: A = sqrt(rate) exp(-i G) with G = (i/2) sum alpha g g + sum beta g.
struct UnitaryJump {
  double rate = 0.0;
  RealMatrix alpha;
  RealVector beta;
};

struct ChannelPiece {
  double t_start = 0.0;
  double t_end = kForever;
  LindbladOperator op;
  std::optional<UnitaryJump> jump;
};

class LindbladChannel {
 public:
  LindbladChannel() = default;
  explicit LindbladChannel(std::vector<ChannelPiece> pieces);

  static LindbladChannel constant(const LindbladOperator& op);
  static LindbladChannel constant_jump(const UnitaryJump& jump);

  const std::vector<ChannelPiece>& pieces() const { return pieces_; }
  const ChannelPiece& at(double t) const;
  bool is_jump() const { return !pieces_.empty() && pieces_.front().jump.has_value(); }
  bool is_linear(double tol = 1e-12) const;
  std::vector<double> breakpoints(double t0, double t1) const;

 private:
  std::vector<ChannelPiece> pieces_;
};

enum class ClassTag { EC1, EC2, EC3, General };
enum class ClassHint { Auto, EC1, EC2, EC3, General };

const char* class_tag_name(ClassTag tag);
ClassHint parse_class_hint(const std::string& s);

// One stochastic term of the self-adjoint construction. A non-Hermitian op
// enters as theta*op + conj(theta)*op^dagger, a Hermitian op as zeta*op.
struct Ec1Term {
  LindbladOperator op;
  bool hermitian = false;
  int noise_slot = 0;
};

// Pairs ops into conjugate partners up to phase and splitting. Empty optional when impossible.
std::optional<std::vector<Ec1Term>> pair_self_adjoint(const std::vector<LindbladOperator>& ops,
                                                      const std::vector<int>& slots, double tol = 1e-9);

struct Classification {
  ClassTag tag = ClassTag::EC1;
  bool mixed = false;
  std::vector<int> ec1, ec2, ec3;
};

Classification classify_set(const std::vector<LindbladChannel>& channels, int modes, ClassHint hint = ClassHint::Auto);

class LindbladSet {
 public:
  LindbladSet() = default;
  LindbladSet(int modes, std::vector<LindbladChannel> channels, ClassHint hint = ClassHint::Auto);

  int modes() const { return modes_; }
  const std::vector<LindbladChannel>& channels() const { return channels_; }
  const Classification& classification() const { return cls_; }
  ClassTag class_tag() const { return cls_.tag; }
  bool empty() const { return channels_.empty(); }

  // Self-adjoint terms active at time t.
  std::vector<Ec1Term> ec1_terms_at(double t) const;
  std::vector<double> breakpoints(double t0, double t1) const;

 private:
  int modes_ = 0;
  std::vector<LindbladChannel> channels_;
  Classification cls_;
};

ValidationReport validate_lindblad(const LindbladSet& set);

struct Model {
  QuadraticHamiltonian hamiltonian;
  LindbladSet lindblad;
  FockConfiguration initial;
  double t_final = 0.0;
  double target_epsilon = 0.01;
  std::uint64_t seed = 0;

  int modes() const { return hamiltonian.modes(); }
  // True when any generator of the stochastic evolution has linear Majorana terms.
  bool needs_linear_ancilla() const;
};

}  // namespace fls

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

#include "fls/gates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "fls/model.hpp"
#include "fls/oracle.hpp"

namespace fls {

namespace {

constexpr double kPi = std::numbers::pi;

using oracle::DenseOperator;

DenseOperator fock(const std::vector<std::pair<FockKind, int>>& f, int modes, Complex coef = 1.0) {
  return oracle::realize(fock_monomial(f, modes, coef));
}

DenseOperator hop(int i, int j, int modes, double J) {
  const DenseOperator h = fock({{FockKind::Create, i}, {FockKind::Annihilate, j}}, modes, J);
  return h + h.adjoint();
}

DenseOperator pair_loss(int i, int j, int modes, double rate) {
  return fock({{FockKind::Annihilate, i}, {FockKind::Annihilate, j}}, modes, std::sqrt(rate));
}

struct Layout {
  int modes = 0;
  oracle::Basis basis;
  std::array<std::uint64_t, 4> logical{};
  int blocked = 0;
  DenseOperator h_hop;         // hopping generator, full space
  DenseOperator h_static;      // interaction, full space
  std::vector<DenseOperator> jumps;
  double hop_time = 0.0;       // per hopping stage
  int stages = 1;
  DenseOperator phase_gate;    // between stages
};

std::uint64_t bits(std::initializer_list<int> modes) {
  std::uint64_t m = 0;
  for (int n : modes) m |= std::uint64_t{1} << n;
  return m;
}

Layout layout(const GateSpec& s, GateScheme scheme) {
  Layout l;
  const double e = s.zeta * s.Gamma;
  if (scheme == GateScheme::Zeno) {
    l.modes = 4;
    l.basis = oracle::Basis::full(4);
    // 00 = 0101, 01 = 0110, 10 = 1001, 11 = 1010 with mode 0 printed first.
    l.logical = {bits({1, 3}), bits({1, 2}), bits({0, 3}), bits({0, 2})};
    l.blocked = 0;
    l.h_hop = hop(1, 2, 4, s.J);
    l.h_static = e * oracle::number_dense(2, 4) * oracle::number_dense(3, 4);
    l.jumps.push_back(pair_loss(2, 3, 4, s.Gamma));
    l.hop_time = s.duration();
  } else {
    // Trap i, species mu in {0, 1} sits on mode 2 i + mu.
    l.modes = 8;
    l.basis = oracle::Basis::particle_numbers(8, {0, 1, 2});
    l.logical = {bits({2, 7}), bits({2, 5}), bits({0, 7}), bits({0, 5})};
    l.blocked = 1;
    l.h_hop = hop(3, 5, 8, s.J);
    if (scheme == GateScheme::Atom2) l.h_hop += hop(2, 4, 8, s.J);
    l.h_static = DenseOperator::Zero(256, 256);
    for (int trap = 0; trap < 4; ++trap) {
      l.h_static += e * oracle::number_dense(2 * trap, 8) * oracle::number_dense(2 * trap + 1, 8);
      l.jumps.push_back(pair_loss(2 * trap, 2 * trap + 1, 8, s.Gamma));
    }
    if (scheme == GateScheme::Atom2) {
      l.stages = 2;
      l.hop_time = 0.5 * s.duration();
      l.phase_gate = DenseOperator::Identity(256, 256) - 2.0 * oracle::number_dense(4, 8);
    } else {
      l.hop_time = s.duration();
    }
  }
  // Background single-particle loss; two particles give a combined rate Gamma'.
  if (s.Gamma_prime > 0.0)
    for (int n = 0; n < l.modes; ++n)
      l.jumps.push_back(fock({{FockKind::Annihilate, n}}, l.modes, std::sqrt(0.5 * s.Gamma_prime)));
  return l;
}

}  // namespace

double GateSpec::duration() const { return t > 0.0 ? t : kPi / J; }

void GateSpec::validate() const {
  if (!(J > 0.0) || !std::isfinite(J)) throw Error(ErrorCode::InvalidArgument, "J must be positive");
  if (!(Gamma > 0.0) || !std::isfinite(Gamma)) throw Error(ErrorCode::InvalidArgument, "Gamma must be positive");
  if (!(Gamma_prime >= 0.0) || !(epsilon0 >= 0.0) || !(t >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "Gamma', epsilon0 and t must be nonnegative");
  if (!std::isfinite(zeta)) throw Error(ErrorCode::InvalidArgument, "zeta must be finite");
}

GateScheme parse_gate_scheme(const std::string& s) {
  if (s == "zeno") return GateScheme::Zeno;
  if (s == "atom1") return GateScheme::Atom1;
  if (s == "atom2") return GateScheme::Atom2;
  throw Error(ErrorCode::InvalidArgument, "unknown gate scheme '" + s + "'");
}

const char* gate_scheme_name(GateScheme s) {
  switch (s) {
    case GateScheme::Zeno: return "zeno";
    case GateScheme::Atom1: return "atom1";
    case GateScheme::Atom2: return "atom2";
  }
  return "?";
}

CzReport simulate_cz(const GateSpec& spec, GateScheme scheme) {
  spec.validate();
  const Layout l = layout(spec, scheme);
  const DenseOperator h = oracle::restrict_to(l.h_hop + l.h_static, l.basis);
  std::vector<DenseOperator> jumps;
  for (const auto& j : l.jumps) jumps.push_back(oracle::restrict_to(j, l.basis));
  oracle::DenseLindbladian lind{l.basis, {oracle::DensePiece{0.0, l.hop_time, h, jumps}}};
  DenseOperator phase;
  if (l.stages > 1) phase = oracle::restrict_to(l.phase_gate, l.basis);

  std::array<long, 4> idx{};
  for (int a = 0; a < 4; ++a) idx[a] = l.basis.index_of(l.logical[a]);
  oracle::EvolveOptions opts;
  opts.operator_input = true;
  opts.rtol = 1e-9;

  CzReport r;
  r.scheme = scheme;
  r.blocked_state = l.blocked;
  const auto dim = static_cast<Eigen::Index>(l.basis.size());
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      oracle::DenseState s{l.basis, ComplexMatrix::Zero(dim, dim)};
      s.rho(idx[a], idx[b]) = 1.0;
      for (int stage = 0; stage < l.stages; ++stage) {
        if (stage > 0) s.rho = (1.0 - spec.epsilon0) * (phase * s.rho * phase.adjoint()) + spec.epsilon0 * s.rho;
        s = oracle::lindblad_evolve(s, lind, 0.0, l.hop_time, opts);
      }
      r.coherence[a][b] = s.rho(idx[a], idx[b]);
      if (a == b) {
        double inside = 0.0;
        for (int c = 0; c < 4; ++c) inside += s.rho(idx[c], idx[c]).real();
        r.survival[a] = s.rho(idx[a], idx[a]).real();
        r.leakage[a] = std::max(0.0, s.rho.trace().real() - inside);
      }
    }
  const std::array<double, 4> ideal{1.0, 1.0, 1.0, -1.0};
  Complex f = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) f += ideal[a] * ideal[b] * r.coherence[a][b];
  r.process_fidelity = f.real() / 16.0;
  r.average_fidelity = (4.0 * r.process_fidelity + 1.0) / 5.0;
  for (double x : r.leakage) r.mean_leakage += x / 4.0;
  r.epsilon = 0.5 * (1.0 - r.survival[l.blocked]);
  r.phase_11 = std::arg(r.coherence[3][1]);
  r.fidelity_11 = r.survival[3];
  return r;
}

LeakageResult leakage_nonhermitian(const GateSpec& spec, LeakageModel which) {
  spec.validate();
  const Complex loss(spec.zeta * spec.Gamma, -0.5 * spec.Gamma);
  ComplexMatrix s;
  if (which == LeakageModel::TwoLevel) {
    ComplexMatrix h(2, 2);
    h << 0.0, spec.J, spec.J, loss;
    s = (Complex(0.0, -kPi / spec.J) * h).exp();
  } else {
    ComplexMatrix h = ComplexMatrix::Zero(4, 4);
    h(0, 1) = h(1, 0) = h(0, 2) = h(2, 0) = spec.J;
    h(1, 3) = h(3, 1) = h(2, 3) = h(3, 2) = spec.J;
    h(1, 1) = h(2, 2) = loss;
    s = (Complex(0.0, -spec.duration()) * h).exp();
  }
  LeakageResult r;
  r.survival = std::norm(s(0, 0));
  r.epsilon = 0.5 * (1.0 - r.survival);
  return r;
}

double blockade_error(const GateSpec& spec) {
  spec.validate();
  return 4.0 * kPi * kPi / (spec.Gamma * spec.duration() * (1.0 + 4.0 * spec.zeta * spec.zeta));
}

double total_error(const GateSpec& spec) {
  return spec.epsilon0 + spec.Gamma_prime * spec.duration() + blockade_error(spec);
}

OptimalTime optimal_time(const GateSpec& spec) {
  spec.validate();
  if (!(spec.Gamma_prime > 0.0)) throw Error(ErrorCode::InvalidArgument, "optimal time needs Gamma' > 0");
  const double w = 1.0 + 4.0 * spec.zeta * spec.zeta;
  OptimalTime o;
  o.t = 2.0 * kPi / std::sqrt(spec.Gamma * spec.Gamma_prime * w);
  o.epsilon = spec.epsilon0 + 4.0 * kPi * std::sqrt(spec.Gamma_prime / (spec.Gamma * w));
  return o;
}

double min_gate_error(double ratio) {
  if (!(ratio > 0.0)) throw Error(ErrorCode::InvalidArgument, "rate ratio must be positive");
  const double c = 8.0 * kPi * kPi;
  return std::min(std::sqrt(c * ratio), std::sqrt(c / ratio));
}

HardnessPoint hardness_point(double ratio, double p0) {
  if (!(p0 > 0.0 && p0 < 1.0)) throw Error(ErrorCode::InvalidArgument, "p0 must lie in (0, 1)");
  HardnessPoint h;
  h.ratio = ratio;
  h.epsilon = min_gate_error(ratio);
  const double edge = p0 * p0 / (8.0 * kPi * kPi);
  if (std::abs(ratio - 1.0) <= 1e-12)
    h.label = "EC1-easy";
  else if (ratio <= edge * (1.0 + 1e-12) || ratio >= (1.0 - 1e-12) / edge)
    h.label = "hard";
  else
    h.label = "inconclusive";
  return h;
}

std::vector<HardnessPoint> sweep_hardness_diagram(double ratio_min, double ratio_max, int points, double p0) {
  if (!(ratio_min > 0.0 && ratio_max >= ratio_min) || points < 1)
    throw Error(ErrorCode::InvalidArgument, "sweep needs 0 < ratio_min <= ratio_max and at least one point");
  std::vector<double> xs;
  const double l0 = std::log10(ratio_min), l1 = std::log10(ratio_max);
  for (int i = 0; i < points; ++i)
    xs.push_back(points == 1 ? ratio_min : std::pow(10.0, l0 + (l1 - l0) * i / (points - 1)));
  if (ratio_min <= 1.0 && ratio_max >= 1.0) xs.push_back(1.0);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(), [](double a, double b) { return std::abs(a - b) <= 1e-12 * b; }),
           xs.end());
  std::vector<HardnessPoint> out;
  for (double x : xs) out.push_back(hardness_point(x, p0));
  return out;
}

std::vector<OptimalErrorRow> optimal_error_table(const std::vector<std::array<double, 3>>& table, double gamma_prime,
                                          double epsilon0) {
  std::vector<OptimalErrorRow> out;
  for (const auto& [field, gamma, zeta] : table) {
    GateSpec s;
    s.Gamma = gamma;
    s.zeta = zeta;
    s.Gamma_prime = gamma_prime;
    s.epsilon0 = epsilon0;
    const auto o = optimal_time(s);
    out.push_back({field, gamma, zeta, o.t, o.epsilon});
  }
  return out;
}

}  // namespace fls

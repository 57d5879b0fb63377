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

#include "fls/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include <unsupported/Eigen/MatrixFunctions>

namespace fls::oracle {

namespace {

void check_modes(int modes, int cap) {
  if (modes <= 0) throw Error(ErrorCode::InvalidArgument, "mode count must be positive");
  if (modes > cap)
    throw Error(ErrorCode::DimensionTooLarge,
                "dense oracle supports at most " + std::to_string(cap) + " modes, got " + std::to_string(modes));
}

// g_i |x> = phase |y>.
inline std::uint64_t apply_majorana(int i, std::uint64_t x, Complex& phase) {
  const int n = i / 2;
  const std::uint64_t bit = std::uint64_t{1} << n;
  const bool string_odd = std::popcount(x & (bit - 1)) % 2 == 1;
  Complex amp = 1.0;
  if (i % 2 == 1) amp = (x & bit) ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
  phase *= string_odd ? -amp : amp;
  return x ^ bit;
}

std::size_t dim_of(int modes) { return std::size_t{1} << modes; }

}  // namespace

DenseOperator majorana_dense(int i, int modes) {
  check_modes(modes, kMaxOperatorModes);
  if (i < 0 || i >= 2 * modes) throw Error(ErrorCode::InvalidArgument, "Majorana index out of range");
  const auto dim = static_cast<Eigen::Index>(dim_of(modes));
  DenseOperator g = DenseOperator::Zero(dim, dim);
  for (std::uint64_t x = 0; x < static_cast<std::uint64_t>(dim); ++x) {
    Complex ph = 1.0;
    const auto y = apply_majorana(i, x, ph);
    g(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) = ph;
  }
  return g;
}

DenseOperator number_dense(int n, int modes) {
  check_modes(modes, kMaxOperatorModes);
  const auto dim = static_cast<Eigen::Index>(dim_of(modes));
  DenseOperator m = DenseOperator::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) m(x, x) = static_cast<double>((x >> n) & 1);
  return m;
}

DenseOperator realize(const LindbladOperator& op) {
  const int modes = op.modes();
  check_modes(modes, kMaxOperatorModes);
  const int n = 2 * modes;
  const auto dim = static_cast<Eigen::Index>(dim_of(modes));
  DenseOperator m = DenseOperator::Identity(dim, dim) * op.d;
  for (std::uint64_t x = 0; x < static_cast<std::uint64_t>(dim); ++x) {
    const auto col = static_cast<Eigen::Index>(x);
    for (int i = 0; i < n; ++i) {
      if (op.b(i) != Complex(0.0)) {
        Complex ph = 1.0;
        const auto y = apply_majorana(i, x, ph);
        m(static_cast<Eigen::Index>(y), col) += op.b(i) * ph;
      }
      for (int j = i + 1; j < n; ++j) {
        if (op.a(i, j) == Complex(0.0)) continue;
        Complex ph = 1.0;
        auto y = apply_majorana(j, x, ph);
        y = apply_majorana(i, y, ph);
        m(static_cast<Eigen::Index>(y), col) += Complex(0.0, 1.0) * op.a(i, j) * ph;
      }
    }
  }
  return m;
}

DenseOperator realize(const HamiltonianSegment& seg) {
  LindbladOperator op{seg.alpha.cast<Complex>(), seg.beta.cast<Complex>(), 0.0};
  return realize(op);
}

DenseOperator realize(const UnitaryJump& jump) {
  const DenseOperator g = realize(HamiltonianSegment{0.0, 0.0, jump.alpha, jump.beta});
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g);
  const ComplexVector ph = (es.eigenvalues().cast<Complex>() * Complex(0.0, -1.0)).array().exp();
  return std::sqrt(jump.rate) * (es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint());
}

Basis Basis::full(int modes) {
  Basis b{modes, {}};
  b.states.resize(dim_of(modes));
  for (std::uint64_t x = 0; x < b.states.size(); ++x) b.states[x] = x;
  return b;
}

Basis Basis::particle_numbers(int modes, const std::vector<int>& numbers) {
  Basis b{modes, {}};
  for (std::uint64_t x = 0; x < dim_of(modes); ++x)
    if (std::find(numbers.begin(), numbers.end(), std::popcount(x)) != numbers.end()) b.states.push_back(x);
  return b;
}

long Basis::index_of(std::uint64_t mask) const {
  const auto it = std::lower_bound(states.begin(), states.end(), mask);
  if (it == states.end() || *it != mask) return -1;
  return static_cast<long>(it - states.begin());
}

DenseOperator restrict_to(const DenseOperator& full, const Basis& basis, double tol) {
  if (basis.is_full()) return full;
  const auto k = static_cast<Eigen::Index>(basis.size());
  DenseOperator out(k, k);
  std::vector<bool> inside(static_cast<std::size_t>(full.rows()), false);
  for (auto s : basis.states) inside[s] = true;
  for (Eigen::Index c = 0; c < k; ++c) {
    const auto col = static_cast<Eigen::Index>(basis.states[static_cast<std::size_t>(c)]);
    for (Eigen::Index r = 0; r < full.rows(); ++r)
      if (!inside[static_cast<std::size_t>(r)] && std::abs(full(r, col)) > tol)
        throw Error(ErrorCode::InvalidArgument, "operator does not preserve the restricted basis");
    for (Eigen::Index r = 0; r < k; ++r) out(r, c) = full(static_cast<Eigen::Index>(basis.states[static_cast<std::size_t>(r)]), col);
  }
  return out;
}

DenseLindbladian dense_lindbladian(const Model& model, double t_final) {
  return dense_lindbladian(model, t_final, Basis::full(model.modes()));
}

DenseLindbladian dense_lindbladian(const Model& model, double t_final, const Basis& basis) {
  check_modes(model.modes(), kMaxOperatorModes);
  std::vector<double> cuts{0.0};
  for (double b : model.hamiltonian.breakpoints(0.0, t_final)) cuts.push_back(b);
  for (double b : model.lindblad.breakpoints(0.0, t_final)) cuts.push_back(b);
  cuts.push_back(t_final);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  DenseLindbladian out{basis, {}};
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
    DensePiece piece{cuts[k], cuts[k + 1], restrict_to(realize(model.hamiltonian.segment_at(mid)), basis), {}};
    for (const auto& ch : model.lindblad.channels()) {
      const auto& p = ch.at(mid);
      if (p.jump) {
        if (p.jump->rate > 0.0) piece.jumps.push_back(restrict_to(realize(*p.jump), basis));
      } else {
        piece.jumps.push_back(restrict_to(realize(p.op), basis));
      }
    }
    out.pieces.push_back(std::move(piece));
  }
  return out;
}

DenseState DenseState::fock(const Basis& basis, std::uint64_t mask) {
  const long i = basis.index_of(mask);
  if (i < 0) throw Error(ErrorCode::InvalidArgument, "initial configuration outside the basis");
  const auto k = static_cast<Eigen::Index>(basis.size());
  DenseState s{basis, ComplexMatrix::Zero(k, k)};
  s.rho(i, i) = 1.0;
  return s;
}

DenseState DenseState::fock(const FockConfiguration& r) {
  check_modes(r.modes(), kMaxOperatorModes);
  return fock(Basis::full(r.modes()), r.mask());
}

DenseState DenseState::maximally_mixed(int modes) {
  check_modes(modes, kMaxOperatorModes);
  const auto dim = static_cast<Eigen::Index>(dim_of(modes));
  return {Basis::full(modes), ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim)};
}

double DenseState::trace_error() const { return std::abs(rho.trace() - Complex(1.0)); }

double DenseState::hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }

double DenseState::min_eigenvalue() const {
  const ComplexMatrix h = (rho + rho.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace {

ComplexMatrix effective_hamiltonian(const DensePiece& piece) {
  ComplexMatrix heff = piece.h;
  for (const auto& a : piece.jumps) heff -= Complex(0.0, 0.5) * (a.adjoint() * a);
  return heff;
}

ComplexMatrix rhs(const ComplexMatrix& heff, const std::vector<DenseOperator>& jumps, const ComplexMatrix& rho) {
  ComplexMatrix out = Complex(0.0, -1.0) * (heff * rho) + Complex(0.0, 1.0) * (rho * heff.adjoint());
  for (const auto& a : jumps) out.noalias() += a * rho * a.adjoint();
  return out;
}

ComplexMatrix evolve_piece(const DensePiece& piece, ComplexMatrix rho, double span, const EvolveOptions& opts) {
  if (span <= 0.0) return rho;
  if (piece.jumps.empty()) {
    const ComplexMatrix u = (Complex(0.0, -span) * piece.h).exp();
    return u * rho * u.adjoint();
  }
  const ComplexMatrix heff = effective_hamiltonian(piece);
  double scale = heff.cwiseAbs().rowwise().sum().maxCoeff();
  for (const auto& a : piece.jumps) scale += a.squaredNorm();
  // Dormand-Prince 5(4) tableau.
  static constexpr double a21 = 1.0 / 5, a31 = 3.0 / 40, a32 = 9.0 / 40, a41 = 44.0 / 45, a42 = -56.0 / 15,
                          a43 = 32.0 / 9, a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729, a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656, b1 = 35.0 / 384, b3 = 500.0 / 1113,
                          b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84, e1 = 71.0 / 57600,
                          e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                          e7 = -1.0 / 40;
  double t = 0.0;
  double h = std::min(span, 0.1 / std::max(scale, 1e-12));
  ComplexMatrix k1 = rhs(heff, piece.jumps, rho);
  long steps = 0;
  while (t < span) {
    if (t + h > span) h = span - t;
    const ComplexMatrix k2 = rhs(heff, piece.jumps, rho + h * (a21 * k1));
    const ComplexMatrix k3 = rhs(heff, piece.jumps, rho + h * (a31 * k1 + a32 * k2));
    const ComplexMatrix k4 = rhs(heff, piece.jumps, rho + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const ComplexMatrix k5 = rhs(heff, piece.jumps, rho + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const ComplexMatrix k6 = rhs(heff, piece.jumps, rho + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const ComplexMatrix next = rho + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const ComplexMatrix k7 = rhs(heff, piece.jumps, next);
    const ComplexMatrix err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double tol = opts.atol + opts.rtol * std::max(rho.cwiseAbs().maxCoeff(), next.cwiseAbs().maxCoeff());
    const double ratio = err.cwiseAbs().maxCoeff() / tol;
    if (ratio <= 1.0) {
      t += h;
      rho = opts.operator_input ? next : ComplexMatrix((next + next.adjoint()) / 2.0);
      k1 = opts.operator_input ? k7 : rhs(heff, piece.jumps, rho);
    }
    const double factor = ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
    if (h < 1e-14 * span || ++steps > 50'000'000)
      throw Error(ErrorCode::ToleranceNotMet, "Lindblad integrator could not meet the tolerance");
  }
  return rho;
}

}  // namespace

ComplexMatrix apply_lindbladian(const DensePiece& piece, const ComplexMatrix& rho) {
  return rhs(effective_hamiltonian(piece), piece.jumps, rho);
}

DenseState lindblad_evolve(const DenseState& rho0, const DenseLindbladian& lindbladian, double t0, double t1,
                           const EvolveOptions& opts) {
  check_modes(rho0.basis.modes, kMaxEvolveModes);
  DenseState s = rho0;
  for (const auto& piece : lindbladian.pieces) {
    const double a = std::max(t0, piece.t_start), b = std::min(t1, piece.t_end);
    if (b > a) s.rho = evolve_piece(piece, s.rho, b - a, opts);
  }
  if (!opts.operator_input) {
    if (s.trace_error() > 1e-8) throw Error(ErrorCode::ToleranceNotMet, "trace drifted during Lindblad evolution");
    if (s.min_eigenvalue() < -1e-7) throw Error(ErrorCode::ToleranceNotMet, "state lost positivity during Lindblad evolution");
  }
  return s;
}

DenseState lindblad_evolve(const DenseState& rho0, const Model& model, double t, const EvolveOptions& opts) {
  check_modes(model.modes(), kMaxEvolveModes);
  return lindblad_evolve(rho0, dense_lindbladian(model, t, rho0.basis), 0.0, t, opts);
}

Distribution measure_distribution(const DenseState& state) {
  const int modes = state.basis.modes;
  Distribution d{modes, std::vector<double>(dim_of(modes), 0.0)};
  for (std::size_t i = 0; i < state.basis.size(); ++i)
    d.p[state.basis.states[i]] = state.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  return d;
}

double tvd(const Distribution& p, const Distribution& q) {
  if (p.p.size() != q.p.size()) throw Error(ErrorCode::InvalidArgument, "distributions live on different spaces");
  double s = 0.0;
  for (std::size_t i = 0; i < p.p.size(); ++i) s += std::abs(p.p[i] - q.p[i]);
  return 0.5 * s;
}

Distribution exact_distribution(const Model& model, double t) {
  check_modes(model.modes(), kMaxEvolveModes);
  return measure_distribution(lindblad_evolve(DenseState::fock(model.initial), model, t));
}

DenseOperator realize(const Monomial& m, int modes) {
  check_modes(modes, kMaxOperatorModes);
  const auto dim = static_cast<Eigen::Index>(dim_of(modes));
  DenseOperator out = DenseOperator::Zero(dim, dim);
  for (std::uint64_t x = 0; x < static_cast<std::uint64_t>(dim); ++x) {
    Complex ph = m.coef;
    std::uint64_t y = x;
    for (auto it = m.indices.rbegin(); it != m.indices.rend(); ++it) y = apply_majorana(*it, y, ph);
    out(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) += ph;
  }
  return out;
}

int flip_locality(const Monomial& m) {
  std::uint64_t flips = 0;
  for (int i : m.indices) flips ^= std::uint64_t{1} << (i / 2);
  return std::popcount(flips);
}

LemmaCheck verify_sparse_lemma(const DenseOperator& o1, int k1, const DenseOperator& o2, int k2, const DenseState& rho) {
  const int modes = rho.basis.modes;
  const ComplexMatrix prod = o1 * rho.rho * o2;
  LemmaCheck c;
  for (Eigen::Index r = 0; r < prod.rows(); ++r) c.lhs += std::abs(prod(r, r));
  const double comb = std::pow(static_cast<double>(modes), k1 + k2) / (std::tgamma(k1 + 1.0) * std::tgamma(k2 + 1.0));
  c.bound = comb * o1.cwiseAbs().maxCoeff() * o2.cwiseAbs().maxCoeff();
  c.holds = c.lhs <= c.bound * (1.0 + 1e-12);
  return c;
}

}  // namespace fls::oracle

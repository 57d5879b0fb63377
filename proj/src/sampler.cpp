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

#include "fls/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

namespace fls {

namespace {

std::atomic<long> g_clamped{0};
std::atomic<double> g_max_negative{0.0};
std::atomic<double> g_max_imag{0.0};

void raise_max(std::atomic<double>& a, double v) {
  double cur = a.load(std::memory_order_relaxed);
  while (v > cur && !a.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
  }
}

}  // namespace

ClampStats clamp_stats() { return {g_clamped.load(), g_max_negative.load(), g_max_imag.load()}; }

void reset_clamp_stats() {
  g_clamped = 0;
  g_max_negative = 0.0;
  g_max_imag = 0.0;
}

double extract_probability(Complex pf) {
  const double im = std::abs(pf.imag());
  raise_max(g_max_imag, im);
  if (im > 1e-7 * std::max(1.0, std::abs(pf))) {
    std::ostringstream os;
    os << "Pfaffian probability has imaginary residue " << im;
    throw Error(ErrorCode::Numerical, os.str());
  }
  double p = pf.real();
  if (p < 0.0 || p > 1.0) {
    ++g_clamped;
    raise_max(g_max_negative, p < 0.0 ? -p : p - 1.0);
    p = std::clamp(p, 0.0, 1.0);
  }
  return p;
}

SkewMatrix build_M(const ComplexMatrix& heisenberg_T, const std::vector<int>& initial_occupation) {
  const auto k = heisenberg_T.rows();
  const auto n2 = heisenberg_T.cols();
  if (n2 != 2 * static_cast<Eigen::Index>(initial_occupation.size()))
    throw Error(ErrorCode::InvalidArgument, "initial occupation does not match propagator size");
  ComplexMatrix u(2 * k, n2);
  u.topRows(k) = heisenberg_T / 2.0;
  u.bottomRows(k) = heisenberg_T.conjugate() / 2.0;
  // <r'| g_{2n} g_{2n+1} |r'> = +i for an empty mode and -i for an occupied one.
  ComplexMatrix ul(2 * k, n2);
  for (Eigen::Index n = 0; n < n2 / 2; ++n) {
    const Complex s(0.0, initial_occupation[static_cast<std::size_t>(n)] ? -1.0 : 1.0);
    ul.col(2 * n) = u.col(2 * n) - s * u.col(2 * n + 1);
    ul.col(2 * n + 1) = s * u.col(2 * n) + u.col(2 * n + 1);
  }
  const ComplexMatrix g = ul * u.transpose();
  ComplexMatrix m = g.triangularView<Eigen::StrictlyUpper>();
  m -= m.transpose().eval();
  return SkewMatrix(m);
}

Complex catalog_probability(const SkewMatrix& m, int rows, const std::vector<int>& sites, const std::vector<int>& bits) {
  const int k = static_cast<int>(sites.size());
  ComplexMatrix sub(2 * k, 2 * k);
  int occupied = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      sub(i, j) = m(sites[i], sites[j]);
      sub(i, k + j) = m(sites[i], rows + sites[j]);
      sub(k + i, j) = m(rows + sites[i], sites[j]);
      sub(k + i, k + j) = m(rows + sites[i], rows + sites[j]);
    }
  }
  for (int i = 0; i < k; ++i) {
    if (!bits[i]) continue;
    // An occupied site reads c^dagger c = 1 - c c^dagger.
    ++occupied;
    sub(i, k + i) -= 1.0;
    sub(k + i, i) += 1.0;
  }
  const Complex pf = pfaffian_inplace(sub);
  const bool odd = ((k * (k - 1) / 2) + occupied) % 2 == 1;
  return odd ? -pf : pf;
}

OutcomeDistribution::OutcomeDistribution(const GaussianPropagator& prop, const FockConfiguration& initial,
                                         bool linear_ancilla)
    : system_(initial.modes()), linear_(linear_ancilla) {
  const int total = prop.modes();
  if (system_ + (linear_ ? 1 : 0) > total) throw Error(ErrorCode::InvalidArgument, "propagator smaller than system");
  rows_ = system_ + (linear_ ? 1 : 0);
  // Rows of T for the inverse propagator are read off the columns of R.
  ComplexMatrix t(rows_, 2 * total);
  for (int r = 0; r < rows_; ++r) {
    const int m = r < system_ ? r : total - 1;
    t.row(r).real() = prop.R.col(2 * m).transpose();
    t.row(r).imag() = prop.R.col(2 * m + 1).transpose();
  }
  std::vector<int> occ(static_cast<std::size_t>(total), 0);
  for (int n = 0; n < system_; ++n) occ[static_cast<std::size_t>(n)] = initial.occupied(n);
  sectors_.push_back(build_M(t, occ));
  if (linear_) {
    occ.back() = 1;
    sectors_.push_back(build_M(t, occ));
  }
}

double OutcomeDistribution::probability(const FockConfiguration& r) const {
  if (r.modes() != system_) throw Error(ErrorCode::InvalidArgument, "configuration length does not match");
  std::vector<int> sites(static_cast<std::size_t>(rows_)), bits(static_cast<std::size_t>(rows_));
  for (int n = 0; n < rows_; ++n) {
    sites[static_cast<std::size_t>(n)] = n;
    bits[static_cast<std::size_t>(n)] = n < system_ ? r.occupied(n) : 0;
  }
  if (!linear_) return extract_probability(catalog_probability(sectors_[0], rows_, sites, bits));
  Complex acc = 0.0;
  for (const auto& m : sectors_)
    for (int s = 0; s < 2; ++s) {
      bits.back() = s;
      acc += catalog_probability(m, rows_, sites, bits);
    }
  return extract_probability(acc / 2.0);
}

double OutcomeDistribution::prefix_marginal(std::uint64_t mask, int k) const {
  std::vector<int> sites(static_cast<std::size_t>(k)), bits(static_cast<std::size_t>(k));
  for (int n = 0; n < k; ++n) {
    sites[static_cast<std::size_t>(n)] = n;
    bits[static_cast<std::size_t>(n)] = static_cast<int>((mask >> n) & 1u);
  }
  Complex acc = 0.0;
  for (const auto& m : sectors_) acc += catalog_probability(m, rows_, sites, bits);
  return extract_probability(acc / static_cast<double>(sectors_.size()));
}

FockConfiguration OutcomeDistribution::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uint64_t mask = 0;
  double prefix = 1.0;
  for (int n = 0; n < system_; ++n) {
    const std::uint64_t with = mask | (std::uint64_t{1} << n);
    const double p1 = std::min(prefix_marginal(with, n + 1), prefix);
    const double cond = prefix > 0.0 ? p1 / prefix : 0.5;
    if (unif(rng) < cond) {
      mask = with;
      prefix = p1;
    } else {
      prefix = prefix - p1;
    }
  }
  return FockConfiguration(system_, mask);
}

Distribution OutcomeDistribution::enumerate() const {
  if (system_ > 14) throw Error(ErrorCode::DimensionTooLarge, "enumeration is limited to 14 modes");
  Distribution d{system_, std::vector<double>(std::size_t{1} << system_)};
  for (std::uint64_t r = 0; r < d.p.size(); ++r) d.p[r] = probability(FockConfiguration(system_, r));
  return d;
}

}  // namespace fls

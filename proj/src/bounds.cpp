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

#include "fls/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fls/oracle.hpp"

namespace fls {

namespace {

constexpr int kMaxDenseModes = 8;

// Norm bound of an operator together with its optional dense realization.
struct Factor {
  double n = 0.0;
  bool dense = false;
  ComplexMatrix m;
};

Factor identity(int dim, bool dense) {
  Factor f{1.0, dense, {}};
  if (dense) f.m = ComplexMatrix::Identity(dim, dim);
  return f;
}

Factor scale(const Factor& a, Complex c) {
  Factor f{std::abs(c) * a.n, a.dense, {}};
  if (a.dense) f.m = c * a.m;
  return f;
}

Factor adj(const Factor& a) {
  Factor f{a.n, a.dense, {}};
  if (a.dense) f.m = a.m.adjoint();
  return f;
}

Factor mul(const Factor& a, const Factor& b) {
  Factor f{a.n * b.n, a.dense, {}};
  if (a.dense) f.m = a.m * b.m;
  return f;
}

Factor mul(const Factor& a, const Factor& b, const Factor& c) { return mul(mul(a, b), c); }

Factor add(const Factor& a, const Factor& b) {
  Factor f{a.n + b.n, a.dense, {}};
  if (a.dense) f.m = a.m + b.m;
  return f;
}

Factor comm(const Factor& a, const Factor& b) {
  Factor f{2.0 * a.n * b.n, a.dense, {}};
  if (a.dense) f.m = a.m * b.m - b.m * a.m;
  return f;
}

Factor anti(const Factor& a, const Factor& b) {
  Factor f{2.0 * a.n * b.n, a.dense, {}};
  if (a.dense) f.m = a.m * b.m + b.m * a.m;
  return f;
}

// Sum over all orderings of the factors.
Factor perm(std::vector<Factor> xs) {
  double n = 1.0;
  for (std::size_t i = 0; i < xs.size(); ++i) n *= xs[i].n * static_cast<double>(i + 1);
  Factor f{n, xs.front().dense, {}};
  if (!f.dense) return f;
  std::vector<int> order(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  f.m = ComplexMatrix::Zero(xs.front().m.rows(), xs.front().m.cols());
  do {
    ComplexMatrix p = xs[static_cast<std::size_t>(order[0])].m;
    for (std::size_t i = 1; i < order.size(); ++i) p = p * xs[static_cast<std::size_t>(order[i])].m;
    f.m += p;
  } while (std::next_permutation(order.begin(), order.end()));
  return f;
}

Factor zero_like(const Factor& a) { return scale(a, 0.0); }

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

struct Builder {
  CorrectionProfile* profile;
  void push(const std::string& label, const Factor& d1, const Factor& d2) {
    CorrectionTerm t;
    t.label = label;
    t.norm1 = d1.n;
    t.norm2 = d2.n;
    if (d1.dense) {
      t.dense1 = spectral_norm(d1.m);
      t.dense2 = spectral_norm(d2.m);
    }
    profile->terms.push_back(std::move(t));
  }
};

Factor atom(const LindbladOperator& op, bool dense) {
  Factor f{norm_bound(op), dense, {}};
  if (dense) f.m = oracle::realize(op);
  return f;
}

Factor atom(const HamiltonianSegment& h, bool dense) {
  Factor f{norm_bound(h), dense, {}};
  if (dense) f.m = oracle::realize(h);
  return f;
}

Factor atom(const UnitaryJump& j, bool dense) {
  Factor f{std::sqrt(std::max(j.rate, 0.0)), dense, {}};
  if (dense) f.m = oracle::realize(j);
  return f;
}

void ec1_terms(Builder& out, const Factor& h, const std::vector<Factor>& a, const Factor& id) {
  std::vector<Factor> ad;
  for (const auto& x : a) ad.push_back(adj(x));
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t q = 0; q < n; ++q) {
      out.push("ec1.dd", scale(mul(ad[q], ad[k]), 0.25), comm(a[q], a[k]));
      out.push("ec1.da", scale(mul(ad[q], a[k]), 0.25), comm(a[q], ad[k]));
      out.push("ec1.ad", scale(mul(a[q], ad[k]), 0.25), comm(ad[q], a[k]));
      out.push("ec1.aa", scale(mul(a[q], a[k]), 0.25), comm(ad[q], ad[k]));
    }
  for (std::size_t k = 0; k < n; ++k) {
    Factor v = zero_like(id);
    for (std::size_t q = 0; q < n; ++q) {
      v = add(v, scale(anti(ad[k], anti(ad[q], a[q])), 0.25));
      v = add(v, scale(perm({ad[k], ad[q], a[q]}), -1.0 / 6.0));
    }
    out.push("ec1.AV", a[k], v);
    out.push("ec1.VA", v, a[k]);
    out.push("ec1.VdAd", adj(v), ad[k]);
    out.push("ec1.AdVd", ad[k], adj(v));
  }
  Factor w = zero_like(id), s = zero_like(id);
  for (std::size_t k = 0; k < n; ++k) {
    w = add(w, scale(add(comm(comm(h, a[k]), ad[k]), anti(h, mul(ad[k], a[k]))), Complex(0.0, -1.0 / 6.0)));
    s = add(s, anti(ad[k], a[k]));
  }
  w = add(w, scale(mul(s, s), -0.125));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t q = 0; q < n; ++q) w = add(w, scale(perm({ad[k], a[k], ad[q], a[q]}), 1.0 / 48.0));
  out.push("ec1.W", w, id);
  out.push("ec1.Wd", id, adj(w));
}

void ec2_terms(Builder& out, const Factor& h, const std::vector<Factor>& a, double gamma, const Factor& id) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    const Factor ad = adj(a[k]);
    const Factor c = add(scale(ad, gamma), scale(comm(ad, h), Complex(0.0, 0.5)));
    out.push("ec2.AC", a[k], c);
    out.push("ec2.CdAd", adj(c), ad);
  }
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t q = 0; q < a.size(); ++q)
      out.push("ec2.AA", scale(mul(a[k], a[q]), -0.5), mul(adj(a[q]), adj(a[k])));
  out.push("ec2.scalar", scale(id, -0.5 * gamma * gamma), id);
}

void ec3_terms(Builder& out, const Factor& h, const std::vector<Factor>& a, const Factor& id) {
  std::vector<Factor> ad;
  for (const auto& x : a) ad.push_back(adj(x));
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t q = 0; q < n; ++q) {
      out.push("ec3.da", scale(mul(ad[k], a[q]), 0.25), mul(ad[q], a[k]));
      out.push("ec3.aa", scale(mul(a[k], a[q]), -0.5), mul(ad[q], ad[k]));
    }
  for (std::size_t k = 0; k < n; ++k) {
    Factor qk = zero_like(id);
    for (std::size_t q = 0; q < n; ++q) qk = add(qk, scale(anti(ad[k], mul(ad[q], a[q])), 1.0 / 12.0));
    out.push("ec3.AQ", a[k], qk);
    out.push("ec3.QdAd", adj(qk), ad[k]);
  }
  Factor m = zero_like(id);
  for (std::size_t k = 0; k < n; ++k) {
    const Factor inner = add(mul(ad[k], h, a[k]), scale(anti(h, mul(ad[k], a[k])), -0.5));
    m = add(m, scale(inner, Complex(0.0, 1.0 / 6.0)));
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t q = 0; q < n; ++q) {
      const Factor x = add(mul(mul(ad[q], a[q]), mul(ad[k], a[k])), scale(mul(mul(ad[q], a[k]), mul(ad[k], a[q])), -0.5));
      m = add(m, scale(x, -1.0 / 12.0));
    }
  out.push("ec3.M", m, id);
  out.push("ec3.Md", id, adj(m));
}

// Piece boundaries of the Hamiltonian and Lindblad schedules inside [0, t].
std::vector<double> pieces(const Model& model, double t) {
  std::vector<double> cuts{0.0, t};
  for (double b : model.hamiltonian.breakpoints(0.0, t)) cuts.push_back(b);
  for (double b : model.lindblad.breakpoints(0.0, t)) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

double CorrectionProfile::weight() const {
  double s = 0.0;
  for (const auto& t : terms) s += t.norm1 * t.norm2;
  return s;
}

double CorrectionProfile::dense_weight() const {
  double s = 0.0;
  for (const auto& t : terms) s += std::max(t.dense1, 0.0) * std::max(t.dense2, 0.0);
  return s;
}

double norm_bound(const HamiltonianSegment& h) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < h.alpha.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i) s += std::abs(h.alpha(i, j));
  return s + h.beta.cwiseAbs().sum();
}

double norm_bound(const LindbladOperator& op) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < op.a.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i) s += std::abs(op.a(i, j));
  return s + op.b.cwiseAbs().sum() + std::abs(op.d);
}

CorrectionProfile correction_norms(const Model& model, double t, bool dense) {
  const auto& set = model.lindblad;
  const auto& cls = set.classification();
  if (cls.tag == ClassTag::General)
    throw Error(ErrorCode::UnclassifiedModel, "no correction structure for an unclassified Lindblad set");
  const int modes = model.modes();
  dense = dense && modes <= kMaxDenseModes;
  CorrectionProfile p;
  p.class_tag = cls.tag;
  p.k_m = (!cls.ec1.empty() || !cls.ec3.empty()) ? 8 : 4;
  p.has_dense = dense;
  Builder out{&p};
  const int dim = 1 << modes;
  const Factor id = identity(dense ? dim : 0, dense);
  const Factor h = atom(model.hamiltonian.segment_at(t), dense);

  if (!cls.ec1.empty()) {
    std::vector<Factor> a;
    for (const auto& term : set.ec1_terms_at(t))
      a.push_back(atom(term.hermitian ? term.op.scaled(1.0 / std::sqrt(2.0)) : term.op, dense));
    ec1_terms(out, h, a, id);
  }
  if (!cls.ec2.empty()) {
    std::vector<Factor> a;
    double gamma = 0.0;
    for (int c : cls.ec2) {
      const auto& jump = *set.channels()[static_cast<std::size_t>(c)].at(t).jump;
      gamma += jump.rate;
      a.push_back(atom(jump, dense));
    }
    ec2_terms(out, h, a, gamma, id);
  }
  if (!cls.ec3.empty()) {
    std::vector<Factor> a;
    for (int c : cls.ec3) a.push_back(atom(set.channels()[static_cast<std::size_t>(c)].at(t).op, dense));
    ec3_terms(out, h, a, id);
  }
  return p;
}

double hamming_ball(int modes, int k) {
  double s = 0.0, c = 1.0;
  for (int j = 0; j <= std::min(k, modes); ++j) {
    s += c;
    c = c * (modes - j) / (j + 1);
  }
  return s;
}

double correction_integral(const Model& model, double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "time must be nonnegative");
  if (t == 0.0) return 0.0;
  const auto cuts = pieces(model, t);
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    integral += (cuts[i + 1] - cuts[i]) * correction_norms(model, mid).weight();
  }
  return integral;
}

BoundReport bound_report(const Model& model, double t, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "timestep must be positive");
  BoundReport r;
  const auto& cls = model.lindblad.classification();
  if (cls.tag == ClassTag::General)
    throw Error(ErrorCode::UnclassifiedModel, "no error bound for an unclassified Lindblad set");
  r.class_tag = cls.tag;
  r.modes = model.modes();
  r.k_m = (!cls.ec1.empty() || !cls.ec3.empty()) ? 8 : 4;
  r.dt = dt;
  r.integral = correction_integral(model, t);
  const double ball = hamming_ball(r.modes, r.k_m);
  r.prefactor = ball * ball;
  const double lit = std::pow(static_cast<double>(r.modes), r.k_m) / factorial(r.k_m);
  r.prefactor_literal = lit * lit;
  r.epsilon = 0.5 * dt * r.prefactor * r.integral;
  r.epsilon_literal = 0.5 * dt * r.prefactor_literal * r.integral;
  return r;
}

double error_bound(const Model& model, double t, double dt) { return bound_report(model, t, dt).epsilon; }

double choose_dt(const Model& model, double t, double target_epsilon) {
  if (!(target_epsilon > 0.0 && target_epsilon < 1.0))
    throw Error(ErrorCode::InvalidArgument, "target epsilon must lie in (0, 1)");
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "evolution time must be positive");
  double cap = t;
  const auto cuts = pieces(model, t);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) cap = std::min(cap, cuts[i + 1] - cuts[i]);
  const auto& cls = model.lindblad.classification();
  for (std::size_t i = 0; i + 1 < cuts.size() && !cls.ec2.empty(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    double rate = 0.0;
    for (int c : cls.ec2) rate += model.lindblad.channels()[static_cast<std::size_t>(c)].at(mid).jump->rate;
    if (rate > 0.0) cap = std::min(cap, 0.5 * (1.0 - 1e-9) / rate);
  }
  const double per_dt = error_bound(model, t, 1.0);
  if (per_dt > 0.0) cap = std::min(cap, target_epsilon / per_dt);
  if (!(cap >= 1e-9 * t))
    throw Error(ErrorCode::InfeasibleTarget, "required timestep falls below 1e-9 of the evolution time");
  const double steps = std::ceil(t / cap * (1.0 - 1e-12));
  if (steps > static_cast<double>(std::numeric_limits<int>::max()))
    throw Error(ErrorCode::InfeasibleTarget, "required step count overflows");
  const double dt = t / std::max(steps, 1.0);
  if (dt < 1e-9 * t) throw Error(ErrorCode::InfeasibleTarget, "required timestep falls below 1e-9 of the evolution time");
  return dt;
}

RuntimeEstimate runtime_estimate(int modes, double t, double dt, long n_trajectories, bool ancilla_per_step) {
  if (modes <= 0 || !(t > 0.0) || !(dt > 0.0) || n_trajectories <= 0)
    throw Error(ErrorCode::InvalidArgument, "runtime estimate needs positive inputs");
  RuntimeEstimate r;
  const double steps = t / dt;
  const double l = modes + (ancilla_per_step ? steps : 0.0);
  r.effective_modes = l;
  r.per_trajectory = std::pow(l, 4) + std::pow(l, 3) * steps;
  r.total = r.per_trajectory * static_cast<double>(n_trajectories);
  return r;
}

}  // namespace fls

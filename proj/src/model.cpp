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

#include "fls/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fls {

namespace {

constexpr double kTileTol = 1e-12;

std::vector<double> interior_points(const std::vector<double>& starts, double t0, double t1) {
  std::vector<double> out;
  for (double s : starts)
    if (s > t0 + kTileTol && s < t1 - kTileTol) out.push_back(s);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

QuadraticHamiltonian::QuadraticHamiltonian(int modes, std::vector<HamiltonianSegment> segments)
    : modes_(modes), segments_(std::move(segments)) {
  if (modes <= 0) throw Error(ErrorCode::Schema, "mode count must be positive");
  if (segments_.empty()) throw Error(ErrorCode::Schema, "Hamiltonian needs at least one segment");
  const int n = 2 * modes;
  for (auto& s : segments_) {
    if (s.alpha.size() == 0) s.alpha = RealMatrix::Zero(n, n);
    if (s.beta.size() == 0) s.beta = RealVector::Zero(n);
    if (s.alpha.rows() != n || s.alpha.cols() != n)
      throw Error(ErrorCode::Schema, "alpha must be 2L x 2L");
    if (s.beta.size() != n) throw Error(ErrorCode::Schema, "beta must have length 2L");
  }
}

QuadraticHamiltonian QuadraticHamiltonian::constant(const RealMatrix& alpha, const RealVector& beta, double t_end) {
  return QuadraticHamiltonian(static_cast<int>(alpha.rows() / 2), {HamiltonianSegment{0.0, t_end, alpha, beta}});
}

QuadraticHamiltonian QuadraticHamiltonian::zero(int modes, double t_end) {
  return QuadraticHamiltonian(modes, {HamiltonianSegment{0.0, t_end, {}, {}}});
}

double QuadraticHamiltonian::t_final() const { return segments_.empty() ? 0.0 : segments_.back().t_end; }

bool QuadraticHamiltonian::has_linear_terms() const {
  return std::any_of(segments_.begin(), segments_.end(), [](const auto& s) { return s.beta.cwiseAbs().maxCoeff() > 0.0; });
}

double QuadraticHamiltonian::max_alpha_norm() const {
  double m = 0.0;
  for (const auto& s : segments_) m = std::max(m, s.alpha.norm());
  return m;
}

const HamiltonianSegment& QuadraticHamiltonian::segment_at(double t) const {
  for (const auto& s : segments_)
    if (t >= s.t_start - kTileTol && t < s.t_end) return s;
  if (!segments_.empty() && std::abs(t - segments_.back().t_end) <= kTileTol) return segments_.back();
  std::ostringstream os;
  os << "Hamiltonian schedule does not cover t=" << t;
  throw Error(ErrorCode::ScheduleGap, os.str());
}

std::vector<double> QuadraticHamiltonian::breakpoints(double t0, double t1) const {
  std::vector<double> starts;
  for (const auto& s : segments_) starts.push_back(s.t_start);
  return interior_points(starts, t0, t1);
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& i : issues) out += (out.empty() ? "" : "; ") + i;
  return out;
}

ValidationReport validate_hamiltonian(const QuadraticHamiltonian& h) {
  ValidationReport r;
  const auto& segs = h.segments();
  if (segs.empty()) {
    r.fail("no segments");
    return r;
  }
  if (std::abs(segs.front().t_start) > kTileTol) r.fail("schedule must start at t=0");
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const auto& s = segs[k];
    if (!(s.t_end > s.t_start)) r.fail("segment " + std::to_string(k) + " has non-positive length");
    if (k > 0 && std::abs(segs[k - 1].t_end - s.t_start) > kTileTol)
      r.fail("gap or overlap between segments " + std::to_string(k - 1) + " and " + std::to_string(k));
    if (!s.alpha.allFinite() || !s.beta.allFinite()) r.fail("segment " + std::to_string(k) + " has non-finite entries");
    const double asym = (s.alpha + s.alpha.transpose()).cwiseAbs().maxCoeff();
    if (asym > kTileTol) {
      std::ostringstream os;
      os << "segment " << k << " alpha is not antisymmetric (max |alpha + alpha^T| = " << asym << ")";
      r.fail(os.str());
    }
  }
  return r;
}

LindbladOperator LindbladOperator::make(const ComplexMatrix& a_raw, const ComplexVector& b, Complex d) {
  if (a_raw.rows() != a_raw.cols() || a_raw.rows() != b.size() || b.size() % 2 != 0)
    throw Error(ErrorCode::Schema, "Lindblad operator needs a 2L x 2L matrix a and a 2L vector b");
  LindbladOperator op;
  op.a = (a_raw - a_raw.transpose()) / 2.0;
  op.b = b;
  // (i/2) sum S_ij g_i g_j over the symmetric part S reduces to (i/2) tr S.
  op.d = d + Complex(0.0, 0.5) * a_raw.diagonal().sum();
  return op;
}

LindbladOperator LindbladOperator::zero(int modes) {
  return {ComplexMatrix::Zero(2 * modes, 2 * modes), ComplexVector::Zero(2 * modes), 0.0};
}

LindbladOperator LindbladOperator::scalar(int modes, Complex d) {
  LindbladOperator op = zero(modes);
  op.d = d;
  return op;
}

LindbladOperator LindbladOperator::adjoint() const { return {a.conjugate(), b.conjugate(), std::conj(d)}; }

LindbladOperator LindbladOperator::scaled(Complex z) const { return {a * z, b * z, d * z}; }

LindbladOperator LindbladOperator::plus(const LindbladOperator& o) const { return {a + o.a, b + o.b, d + o.d}; }

bool LindbladOperator::is_linear(double tol) const { return a.size() == 0 || a.cwiseAbs().maxCoeff() <= tol; }

bool LindbladOperator::is_hermitian(double tol) const {
  const double ai = a.size() ? a.imag().cwiseAbs().maxCoeff() : 0.0;
  const double bi = b.size() ? b.imag().cwiseAbs().maxCoeff() : 0.0;
  return ai <= tol && bi <= tol && std::abs(d.imag()) <= tol;
}

bool LindbladOperator::is_finite() const { return a.allFinite() && b.allFinite() && std::isfinite(std::abs(d)); }

LindbladOperator fock_operator_as_majorana(FockKind kind, int n, int modes) {
  if (n < 0 || n >= modes) throw Error(ErrorCode::InvalidArgument, "mode index out of range");
  LindbladOperator op = LindbladOperator::zero(modes);
  const double s = kind == FockKind::Annihilate ? 0.5 : -0.5;
  op.b(2 * n) = 0.5;
  op.b(2 * n + 1) = Complex(0.0, s);
  return op;
}

LindbladOperator majorana_product(const LindbladOperator& x, const LindbladOperator& y) {
  if (!x.is_linear(0.0) || !y.is_linear(0.0))
    throw Error(ErrorCode::InvalidArgument, "product of quadratic operators is not quadratic-linear");
  const ComplexMatrix m = x.b * y.b.transpose();
  LindbladOperator out;
  out.a = Complex(0.0, -1.0) * (m - m.transpose());
  out.b = y.d * x.b + x.d * y.b;
  out.d = m.trace() + x.d * y.d;
  return out;
}

LindbladOperator fock_monomial(const std::vector<std::pair<FockKind, int>>& factors, int modes, Complex coef) {
  if (factors.size() > 2) throw Error(ErrorCode::Schema, "Fock monomials are limited to two factors");
  LindbladOperator acc = LindbladOperator::scalar(modes, 1.0);
  for (const auto& [kind, n] : factors) acc = majorana_product(acc, fock_operator_as_majorana(kind, n, modes));
  return acc.scaled(coef);
}

LindbladChannel::LindbladChannel(std::vector<ChannelPiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw Error(ErrorCode::Schema, "Lindblad channel needs at least one piece");
  const bool jump = pieces_.front().jump.has_value();
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    if (pieces_[k].jump.has_value() != jump)
      throw Error(ErrorCode::Schema, "a Lindblad channel cannot mix unitary-jump and quadratic-linear pieces");
    if (k > 0 && std::abs(pieces_[k - 1].t_end - pieces_[k].t_start) > kTileTol)
      throw Error(ErrorCode::ScheduleGap, "Lindblad schedule has a gap");
  }
}

LindbladChannel LindbladChannel::constant(const LindbladOperator& op) {
  return LindbladChannel({ChannelPiece{0.0, kForever, op, std::nullopt}});
}

LindbladChannel LindbladChannel::constant_jump(const UnitaryJump& jump) {
  const int modes = static_cast<int>(jump.beta.size() / 2);
  return LindbladChannel({ChannelPiece{0.0, kForever, LindbladOperator::zero(modes), jump}});
}

const ChannelPiece& LindbladChannel::at(double t) const {
  for (const auto& p : pieces_)
    if (t >= p.t_start - kTileTol && t < p.t_end) return p;
  if (std::abs(t - pieces_.back().t_end) <= kTileTol) return pieces_.back();
  std::ostringstream os;
  os << "Lindblad schedule does not cover t=" << t;
  throw Error(ErrorCode::ScheduleGap, os.str());
}

bool LindbladChannel::is_linear(double tol) const {
  if (is_jump()) return false;
  return std::all_of(pieces_.begin(), pieces_.end(), [tol](const auto& p) { return p.op.is_linear(tol); });
}

std::vector<double> LindbladChannel::breakpoints(double t0, double t1) const {
  std::vector<double> starts;
  for (const auto& p : pieces_) starts.push_back(p.t_start);
  return interior_points(starts, t0, t1);
}

const char* class_tag_name(ClassTag tag) {
  switch (tag) {
    case ClassTag::EC1: return "EC1";
    case ClassTag::EC2: return "EC2";
    case ClassTag::EC3: return "EC3";
    case ClassTag::General: return "General";
  }
  return "General";
}

ClassHint parse_class_hint(const std::string& s) {
  std::string l = s;
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (l == "auto" || l.empty()) return ClassHint::Auto;
  if (l == "ec1") return ClassHint::EC1;
  if (l == "ec2") return ClassHint::EC2;
  if (l == "ec3") return ClassHint::EC3;
  if (l == "general") return ClassHint::General;
  throw Error(ErrorCode::Schema, "unknown class hint '" + s + "'");
}

namespace {

ComplexVector flatten(const LindbladOperator& op) {
  const int n = static_cast<int>(op.b.size());
  ComplexVector v(n * (n - 1) / 2 + n + 1);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) v(k++) = op.a(i, j);
  v.segment(k, n) = op.b;
  v(k + n) = op.d;
  return v;
}

LindbladOperator unflatten(const ComplexVector& v, int n) {
  LindbladOperator op;
  op.a = ComplexMatrix::Zero(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      op.a(i, j) = v(k);
      op.a(j, i) = -v(k);
      ++k;
    }
  op.b = v.segment(k, n);
  op.d = v(k + n);
  return op;
}

// Phase e^{i phi} with u ~ e^{i phi} w, when the two unit vectors agree up to phase.
std::optional<Complex> phase_match(const ComplexVector& u, const ComplexVector& w, double tol) {
  const Complex ov = w.dot(u);
  if (std::abs(ov) < 0.5) return std::nullopt;
  const Complex ph = ov / std::abs(ov);
  if ((u - ph * w).cwiseAbs().maxCoeff() > tol) return std::nullopt;
  return ph;
}

struct Group {
  ComplexVector dir;
  double weight = 0.0;
  int slot = 0;
};

}  // namespace

std::optional<std::vector<Ec1Term>> pair_self_adjoint(const std::vector<LindbladOperator>& ops,
                                                      const std::vector<int>& slots, double tol) {
  std::vector<Group> groups;
  int n = 0;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    n = static_cast<int>(ops[k].b.size());
    const ComplexVector v = flatten(ops[k]);
    const double w = v.norm();
    if (w <= tol) continue;
    const ComplexVector u = v / w;
    bool merged = false;
    for (auto& g : groups)
      if (phase_match(u, g.dir, tol)) {
        g.weight += w * w;
        merged = true;
        break;
      }
    if (!merged) groups.push_back({u, w * w, slots.empty() ? static_cast<int>(k) : slots[k]});
  }
  std::vector<Ec1Term> terms;
  std::vector<bool> used(groups.size(), false);
  double wmax = 0.0;
  for (const auto& g : groups) wmax = std::max(wmax, g.weight);
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    if (used[gi]) continue;
    const auto& g = groups[gi];
    const ComplexVector conj_dir = g.dir.conjugate();
    if (auto ph = phase_match(conj_dir, g.dir, tol)) {
      // conj(u) = ph u, so sqrt(ph) u is real.
      const ComplexVector real_dir = std::sqrt(*ph) * g.dir;
      if (real_dir.imag().cwiseAbs().maxCoeff() > tol) return std::nullopt;
      ComplexVector coeffs = real_dir.real().cast<Complex>() * std::sqrt(g.weight);
      terms.push_back({unflatten(coeffs, n), true, g.slot});
      used[gi] = true;
      continue;
    }
    bool found = false;
    for (std::size_t hi = gi + 1; hi < groups.size() && !found; ++hi) {
      if (used[hi] || !phase_match(conj_dir, groups[hi].dir, tol)) continue;
      if (std::abs(groups[hi].weight - g.weight) > tol * std::max(1.0, wmax)) return std::nullopt;
      terms.push_back({unflatten(g.dir * std::sqrt(g.weight), n), false, g.slot});
      used[gi] = used[hi] = true;
      found = true;
    }
    if (!found) return std::nullopt;
  }
  return terms;
}

namespace {

std::vector<double> piece_starts(const std::vector<LindbladChannel>& channels, const std::vector<int>& which) {
  std::vector<double> ts{0.0};
  for (int c : which)
    for (const auto& p : channels[c].pieces()) ts.push_back(std::max(0.0, p.t_start));
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

bool pairs_at_all_times(const std::vector<LindbladChannel>& channels, const std::vector<int>& which) {
  for (double t : piece_starts(channels, which)) {
    std::vector<LindbladOperator> ops;
    for (int c : which) ops.push_back(channels[c].at(t).op);
    if (!pair_self_adjoint(ops, which)) return false;
  }
  return true;
}

}  // namespace

Classification classify_set(const std::vector<LindbladChannel>& channels, int modes, ClassHint hint) {
  Classification cls;
  std::vector<int> jumps, quad, lin;
  for (int k = 0; k < static_cast<int>(channels.size()); ++k) {
    const auto& ch = channels[k];
    for (const auto& p : ch.pieces()) {
      if (p.jump) {
        if (p.jump->rate < 0.0 || !std::isfinite(p.jump->rate)) throw Error(ErrorCode::Schema, "jump rate must be finite and >= 0");
        if (p.jump->alpha.rows() != 2 * modes || p.jump->beta.size() != 2 * modes)
          throw Error(ErrorCode::Schema, "jump generator has wrong dimension");
      } else if (p.op.modes() != modes) {
        throw Error(ErrorCode::Schema, "Lindblad operator has wrong dimension");
      }
    }
    if (ch.is_jump())
      jumps.push_back(k);
    else if (ch.is_linear())
      lin.push_back(k);
    else
      quad.push_back(k);
  }
  std::vector<int> nonjump = quad;
  nonjump.insert(nonjump.end(), lin.begin(), lin.end());
  std::sort(nonjump.begin(), nonjump.end());

  bool general = false;
  if (hint == ClassHint::EC3) {
    if (!quad.empty() || !jumps.empty()) throw Error(ErrorCode::AmbiguousClass, "EC3 requested but some operators are not linear");
    cls.ec3 = lin;
  } else if (pairs_at_all_times(channels, nonjump)) {
    cls.ec1 = nonjump;
  } else if (pairs_at_all_times(channels, quad)) {
    cls.ec1 = quad;
    cls.ec3 = lin;
  } else {
    general = true;
  }
  cls.ec2 = jumps;

  const int parts = !cls.ec1.empty() + !cls.ec2.empty() + !cls.ec3.empty();
  cls.mixed = parts > 1;
  if (general)
    cls.tag = ClassTag::General;
  else if (!cls.ec3.empty())
    cls.tag = ClassTag::EC3;
  else if (!cls.ec1.empty() || cls.ec2.empty())
    cls.tag = ClassTag::EC1;
  else
    cls.tag = ClassTag::EC2;

  switch (hint) {
    case ClassHint::Auto: break;
    case ClassHint::General: cls.tag = ClassTag::General; break;
    case ClassHint::EC1:
      if (cls.tag != ClassTag::EC1 || !cls.ec2.empty())
        throw Error(ErrorCode::AmbiguousClass, std::string("EC1 requested but detected ") + class_tag_name(cls.tag) +
                                                   (cls.mixed ? " (mixed)" : ""));
      break;
    case ClassHint::EC2:
      if (!cls.ec1.empty() || !cls.ec3.empty())
        throw Error(ErrorCode::AmbiguousClass, "EC2 requested but some operators are not unitary jumps");
      cls.tag = ClassTag::EC2;
      break;
    case ClassHint::EC3:
      cls.tag = ClassTag::EC3;
      cls.mixed = false;
      break;
  }
  if (static_cast<long>(channels.size()) > static_cast<long>(modes) * (modes + 1))
    throw Error(ErrorCode::Schema, "more than L(L+1) Lindblad operators");
  return cls;
}

LindbladSet::LindbladSet(int modes, std::vector<LindbladChannel> channels, ClassHint hint)
    : modes_(modes), channels_(std::move(channels)), cls_(classify_set(channels_, modes, hint)) {}

std::vector<Ec1Term> LindbladSet::ec1_terms_at(double t) const {
  std::vector<LindbladOperator> ops;
  for (int c : cls_.ec1) ops.push_back(channels_[c].at(t).op);
  auto terms = pair_self_adjoint(ops, cls_.ec1);
  if (!terms) throw Error(ErrorCode::NotEC1, "operators do not form a self-adjoint set");
  return *terms;
}

std::vector<double> LindbladSet::breakpoints(double t0, double t1) const {
  std::vector<double> out;
  for (const auto& ch : channels_) {
    auto b = ch.breakpoints(t0, t1);
    out.insert(out.end(), b.begin(), b.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ValidationReport validate_lindblad(const LindbladSet& set) {
  ValidationReport r;
  for (std::size_t k = 0; k < set.channels().size(); ++k)
    for (const auto& p : set.channels()[k].pieces()) {
      if (p.jump) {
        if (!p.jump->alpha.allFinite() || !p.jump->beta.allFinite()) r.fail("jump " + std::to_string(k) + " has non-finite entries");
        if ((p.jump->alpha + p.jump->alpha.transpose()).cwiseAbs().maxCoeff() > kTileTol)
          r.fail("jump " + std::to_string(k) + " generator is not antisymmetric");
      } else if (!p.op.is_finite()) {
        r.fail("operator " + std::to_string(k) + " has non-finite entries");
      }
    }
  return r;
}

bool Model::needs_linear_ancilla() const {
  if (hamiltonian.has_linear_terms()) return true;
  const auto& cls = lindblad.classification();
  const auto& chans = lindblad.channels();
  for (int c : cls.ec2)
    for (const auto& p : chans[c].pieces())
      if (p.jump->beta.cwiseAbs().maxCoeff() > 0.0) return true;
  for (int c : cls.ec1)
    for (const auto& p : chans[c].pieces())
      if (p.op.b.cwiseAbs().maxCoeff() > 0.0) return true;
  // A scalar part d next to a linear part b induces the linear Hamiltonian -sum Im(conj(d) b_i) g_i.
  for (int c : cls.ec3)
    for (const auto& p : chans[c].pieces())
      if ((std::conj(p.op.d) * p.op.b).imag().cwiseAbs().maxCoeff() > 0.0) return true;
  return false;
}

}  // namespace fls

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

#include "fls/unraveling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace fls {

TrajectoryPlan make_plan(const Model& model, double t_final, double dt, long n_trajectories, std::uint64_t seed) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "timestep must be positive");
  if (!(t_final > 0.0)) throw Error(ErrorCode::InvalidArgument, "evolution time must be positive");
  if (n_trajectories <= 0) throw Error(ErrorCode::InvalidArgument, "trajectory count must be positive");
  TrajectoryPlan p;
  p.t_final = t_final;
  p.n_steps = static_cast<int>(std::ceil(t_final / dt - 1e-9));
  p.dt = t_final / p.n_steps;
  p.class_tag = model.lindblad.class_tag();
  p.seed = seed;
  p.n_trajectories = n_trajectories;
  p.ancilla_count = model.lindblad.classification().ec3.empty() ? 0 : p.n_steps;
  return p;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::mt19937_64 trajectory_rng(std::uint64_t master_seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632BE59BD9B4E019ull)));
}

HamiltonianSegment ec1_step_generator(const HamiltonianSegment& h, const std::vector<Ec1Term>& terms,
                                      const std::vector<Complex>& xi, double dt) {
  HamiltonianSegment g = h;
  const double s = 1.0 / std::sqrt(dt);
  for (const auto& term : terms) {
    if (term.noise_slot < 0 || term.noise_slot >= static_cast<int>(xi.size()))
      throw Error(ErrorCode::NotEC1, "noise slot out of range");
    const Complex x = xi[static_cast<std::size_t>(term.noise_slot)];
    if (term.hermitian) {
      const double zeta = std::sqrt(2.0) * x.real() * s;
      g.alpha += zeta * term.op.a.real();
      g.beta += zeta * term.op.b.real();
    } else {
      const Complex theta = x * s;
      g.alpha += 2.0 * (theta * term.op.a).real();
      g.beta += 2.0 * (theta * term.op.b).real();
    }
  }
  return g;
}

Ec2Draw ec2_step_unitary(const std::vector<double>& rates, double t_start, double dt, std::mt19937_64& rng) {
  double total = 0.0;
  for (double r : rates) total += r * dt;
  if (total >= 0.5) throw Error(ErrorCode::StepTooLarge, "jump probability per step must stay below 0.5; reduce dt");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  const double tau = unif(rng);
  Ec2Draw d;
  double acc = 0.0;
  for (std::size_t k = 0; k < rates.size(); ++k) {
    acc += rates[k] * dt;
    if (u < acc) {
      d.jump = static_cast<int>(k);
      d.time = t_start + tau * dt;
      break;
    }
  }
  return d;
}

namespace {

// Coupling columns between system Majoranas and the ancilla pair (a0, a1).
RealMatrix ec3_coupling(const std::vector<LindbladOperator>& ops, const std::vector<double>& f, double dt, int n) {
  RealMatrix c = RealMatrix::Zero(n, 2);
  const double s = 1.0 / std::sqrt(dt);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    c.col(0) += f[k] * s * ops[k].b.imag();
    c.col(1) -= f[k] * s * ops[k].b.real();
  }
  return c;
}

RealVector scalar_correction(const std::vector<LindbladOperator>& ops, int n) {
  RealVector beta = RealVector::Zero(n);
  for (const auto& op : ops) beta -= (std::conj(op.d) * op.b).imag();
  return beta;
}

struct Prepared {
  int system = 0;
  int total = 0;
  bool linear = false;
  int ancilla_base = 0;
  std::vector<int> ec1, ec2, ec3;
  int channels = 0;
  std::vector<double> cuts;
  // Per Lindblad time piece.
  std::vector<std::vector<Ec1Term>> ec1_terms;
  std::vector<std::vector<LindbladOperator>> ec3_ops;
  std::vector<std::vector<UnitaryJump>> ec2_jumps;

  std::size_t piece_index(double t) const {
    const auto it = std::upper_bound(cuts.begin(), cuts.end(), t);
    return it == cuts.begin() ? 0 : static_cast<std::size_t>(it - cuts.begin() - 1);
  }
};

Prepared prepare(const Model& model, const TrajectoryPlan& plan) {
  const auto& set = model.lindblad;
  const auto& cls = set.classification();
  if (cls.tag == ClassTag::General)
    throw Error(ErrorCode::UnclassifiedModel, "the Lindblad set is not in an efficiently simulable class");
  Prepared p;
  p.system = model.modes();
  p.ec1 = cls.ec1;
  p.ec2 = cls.ec2;
  p.ec3 = cls.ec3;
  p.channels = static_cast<int>(set.channels().size());
  p.linear = model.needs_linear_ancilla();
  // The ancilla dilation turns a jump B into B times the system parity, which
  // only matches the target dynamics when no odd generator terms are present.
  if (p.linear && !p.ec3.empty())
    throw Error(ErrorCode::InvalidArgument,
                "linear Lindblad operators cannot be combined with linear Hamiltonian, noise or scalar-part terms");
  p.ancilla_base = p.system;
  p.total = p.system + plan.ancilla_count + (p.linear ? 1 : 0);
  p.cuts = {0.0};
  for (double b : set.breakpoints(0.0, plan.t_final)) p.cuts.push_back(b);
  for (std::size_t k = 0; k < p.cuts.size(); ++k) {
    const double next = k + 1 < p.cuts.size() ? p.cuts[k + 1] : plan.t_final;
    const double mid = 0.5 * (p.cuts[k] + next);
    p.ec1_terms.push_back(p.ec1.empty() ? std::vector<Ec1Term>{} : set.ec1_terms_at(mid));
    std::vector<LindbladOperator> lin;
    for (int c : p.ec3) lin.push_back(set.channels()[c].at(mid).op);
    p.ec3_ops.push_back(std::move(lin));
    std::vector<UnitaryJump> jumps;
    for (int c : p.ec2) jumps.push_back(*set.channels()[c].at(mid).jump);
    p.ec2_jumps.push_back(std::move(jumps));
  }
  return p;
}

// Right-multiplies the columns `idx` of R by exp(-2 g dur).
void apply_block(RealMatrix& r, const std::vector<int>& idx, const RealMatrix& g, double dur) {
  const RealMatrix e = rotation_exp(g, dur);
  if (static_cast<Eigen::Index>(idx.size()) == r.cols()) {
    r = r * e;
    return;
  }
  const RealMatrix cols = r(Eigen::all, idx) * e;
  r(Eigen::all, idx) = cols;
}

struct Block {
  std::vector<int> idx;
  RealMatrix g;
};

// Active-index generator: system block, optional ancilla pair, optional linear ancilla.
Block make_block(const Prepared& p, const RealMatrix& alpha, const RealVector& beta, int ancilla,
                 const RealMatrix* coupling) {
  const int n = 2 * p.system;
  Block b;
  for (int i = 0; i < n; ++i) b.idx.push_back(i);
  int a0 = -1, x0 = -1;
  if (coupling) {
    a0 = static_cast<int>(b.idx.size());
    b.idx.push_back(2 * ancilla);
    b.idx.push_back(2 * ancilla + 1);
  }
  if (p.linear) {
    x0 = static_cast<int>(b.idx.size());
    b.idx.push_back(2 * (p.total - 1));
    b.idx.push_back(2 * (p.total - 1) + 1);
  }
  const int m = static_cast<int>(b.idx.size());
  b.g = RealMatrix::Zero(m, m);
  b.g.topLeftCorner(n, n) = alpha;
  if (coupling) {
    b.g.block(0, a0, n, 2) = *coupling;
    b.g.block(a0, 0, 2, n) = -coupling->transpose();
  }
  if (p.linear) {
    b.g.block(x0, 0, 1, n) = beta.transpose();
    b.g.block(0, x0, n, 1) = -beta;
  } else if (beta.size() && beta.cwiseAbs().maxCoeff() > 0.0) {
    throw Error(ErrorCode::InvalidArgument, "linear terms present without a linear ancilla");
  }
  return b;
}

GaussianPropagator assemble(const Model& model, const TrajectoryPlan& plan, const Prepared& p, std::mt19937_64& rng,
                            TrajectoryLog* log) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const int n = 2 * p.system;
  GaussianPropagator prop = GaussianPropagator::identity(p.total, 0.0);
  prop.t1 = plan.t_final;
  std::vector<Complex> xi(static_cast<std::size_t>(p.channels));
  std::vector<double> f(p.ec3.size());
  for (int step = 0; step < plan.n_steps; ++step) {
    const double ta = step * plan.dt;
    const double tb = step + 1 == plan.n_steps ? plan.t_final : (step + 1) * plan.dt;
    for (int c : p.ec1) {
      const double re = normal(rng), im = normal(rng);
      xi[static_cast<std::size_t>(c)] = Complex(re, im) * inv_sqrt2;
      if (log) log->ec1_noise.push_back(xi[static_cast<std::size_t>(c)]);
    }
    for (auto& v : f) {
      v = normal(rng);
      if (log) log->ec3_noise.push_back(v);
    }
    Ec2Draw draw;
    if (!p.ec2.empty()) {
      // Interval-averaged rates over the step.
      std::vector<double> rates(p.ec2.size(), 0.0);
      std::vector<double> cuts{ta};
      for (double c : p.cuts)
        if (c > ta && c < tb) cuts.push_back(c);
      cuts.push_back(tb);
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const auto& jumps = p.ec2_jumps[p.piece_index(0.5 * (cuts[k] + cuts[k + 1]))];
        for (std::size_t j = 0; j < jumps.size(); ++j) rates[j] += jumps[j].rate * (cuts[k + 1] - cuts[k]) / (tb - ta);
      }
      draw = ec2_step_unitary(rates, ta, tb - ta, rng);
      if (log) log->ec2_draws.push_back(draw);
    }
    std::vector<double> cuts{ta};
    for (double c : model.hamiltonian.breakpoints(ta, tb)) cuts.push_back(c);
    for (double c : p.cuts)
      if (c > ta && c < tb) cuts.push_back(c);
    if (draw.jump >= 0) cuts.push_back(draw.time);
    cuts.push_back(tb);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const int ancilla = p.ancilla_base + step;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double a = cuts[k], b = cuts[k + 1];
      const double mid = 0.5 * (a + b);
      const auto& hseg = model.hamiltonian.segment_at(mid);
      const std::size_t piece = p.piece_index(mid);
      HamiltonianSegment g = ec1_step_generator(hseg, p.ec1_terms[piece], xi, plan.dt);
      RealMatrix coupling;
      if (!p.ec3.empty()) {
        const auto& ops = p.ec3_ops[piece];
        g.beta += scalar_correction(ops, n);
        coupling = ec3_coupling(ops, f, plan.dt, n);
      }
      const Block blk = make_block(p, g.alpha, g.beta, ancilla, p.ec3.empty() ? nullptr : &coupling);
      apply_block(prop.R, blk.idx, blk.g, b - a);
      if (draw.jump >= 0 && b == draw.time) {
        const auto& jump = p.ec2_jumps[p.piece_index(draw.time)][static_cast<std::size_t>(draw.jump)];
        const Block jb = make_block(p, jump.alpha, jump.beta, ancilla, nullptr);
        apply_block(prop.R, jb.idx, jb.g, 1.0);
      }
    }
  }
  return prop;
}

}  // namespace

HamiltonianSegment ec3_step_generator(const HamiltonianSegment& h, const std::vector<LindbladOperator>& ops,
                                      const std::vector<double>& f, int ancilla, double dt, int total_modes) {
  for (const auto& op : ops)
    if (!op.is_linear()) throw Error(ErrorCode::NotEC3, "operator has a quadratic part");
  if (f.size() != ops.size()) throw Error(ErrorCode::InvalidArgument, "one noise value per operator is required");
  const auto n = h.alpha.rows();
  if (ancilla < n / 2 || ancilla >= total_modes) throw Error(ErrorCode::InvalidArgument, "ancilla index out of range");
  HamiltonianSegment g = embed_segment(h, total_modes);
  g.beta.head(n) += scalar_correction(ops, static_cast<int>(n));
  const RealMatrix c = ec3_coupling(ops, f, dt, static_cast<int>(n));
  g.alpha.block(0, 2 * ancilla, n, 2) = c;
  g.alpha.block(2 * ancilla, 0, 2, n) = -c.transpose();
  return g;
}

GaussianPropagator assemble_trajectory(const Model& model, const TrajectoryPlan& plan, std::mt19937_64& rng,
                                       TrajectoryLog* log) {
  return assemble(model, plan, prepare(model, plan), rng, log);
}

TrajectoryResult run_trajectories(const TrajectoryPlan& plan, const Model& model, const RunOptions& opts) {
  const Prepared prep = prepare(model, plan);
  const int modes = model.modes();
  const bool average = opts.estimator == Estimator::Average;
  if (average && modes > 14) throw Error(ErrorCode::DimensionTooLarge, "averaged estimator is limited to 14 modes");
  TrajectoryResult res;
  res.modes = modes;
  res.n = plan.n_trajectories;
  res.outcomes.assign(static_cast<std::size_t>(plan.n_trajectories), 0);
  if (opts.keep_logs) res.logs.resize(static_cast<std::size_t>(plan.n_trajectories));

  // Fixed chunking keeps floating-point reduction order independent of the thread count.
  const long chunk = std::max<long>(64, (plan.n_trajectories + 1023) / 1024);
  const long n_chunks = (plan.n_trajectories + chunk - 1) / chunk;
  const std::size_t dim = average ? std::size_t{1} << modes : 0;
  std::vector<std::vector<double>> sums(static_cast<std::size_t>(n_chunks)), sq(static_cast<std::size_t>(n_chunks));
  std::atomic<long> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(std::max(1, opts.threads)));

  auto worker = [&](int w) {
    try {
      for (long c = next++; c < n_chunks; c = next++) {
        auto& s = sums[static_cast<std::size_t>(c)];
        auto& q = sq[static_cast<std::size_t>(c)];
        s.assign(dim, 0.0);
        q.assign(dim, 0.0);
        const long end = std::min(plan.n_trajectories, (c + 1) * chunk);
        for (long i = c * chunk; i < end; ++i) {
          auto rng = trajectory_rng(plan.seed, static_cast<std::uint64_t>(i));
          TrajectoryLog* log = opts.keep_logs ? &res.logs[static_cast<std::size_t>(i)] : nullptr;
          const GaussianPropagator prop = assemble(model, plan, prep, rng, log);
          const OutcomeDistribution dist(prop, model.initial, prep.linear);
          res.outcomes[static_cast<std::size_t>(i)] = dist.sample(rng).mask();
          if (average) {
            const Distribution d = dist.enumerate();
            for (std::size_t r = 0; r < dim; ++r) {
              s[r] += d.p[r];
              q[r] += d.p[r] * d.p[r];
            }
          }
        }
      }
    } catch (...) {
      errors[static_cast<std::size_t>(w)] = std::current_exception();
      next = n_chunks;
    }
  };
  const int threads = std::max(1, opts.threads);
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  const double nt = static_cast<double>(plan.n_trajectories);
  if (average) {
    res.mean = {modes, std::vector<double>(dim, 0.0)};
    std::vector<double> second(dim, 0.0);
    for (long c = 0; c < n_chunks; ++c)
      for (std::size_t r = 0; r < dim; ++r) {
        res.mean.p[r] += sums[static_cast<std::size_t>(c)][r];
        second[r] += sq[static_cast<std::size_t>(c)][r];
      }
    res.stderr_.resize(dim);
    for (std::size_t r = 0; r < dim; ++r) {
      res.mean.p[r] /= nt;
      const double var = std::max(0.0, second[r] / nt - res.mean.p[r] * res.mean.p[r]);
      res.stderr_[r] = nt > 1 ? std::sqrt(var / (nt - 1)) : 0.0;
    }
  } else if (modes <= 20) {
    res.mean = empirical_distribution(res);
    res.stderr_.resize(res.mean.p.size());
    for (std::size_t r = 0; r < res.mean.p.size(); ++r) {
      const double p = res.mean.p[r];
      res.stderr_[r] = nt > 1 ? std::sqrt(p * (1.0 - p) / (nt - 1)) : 0.0;
    }
  }
  return res;
}

Distribution empirical_distribution(const TrajectoryResult& r) {
  if (r.modes > 20) throw Error(ErrorCode::DimensionTooLarge, "empirical table is limited to 20 modes");
  Distribution d{r.modes, std::vector<double>(std::size_t{1} << r.modes, 0.0)};
  for (auto o : r.outcomes) d.p[o] += 1.0;
  for (auto& v : d.p) v /= static_cast<double>(r.outcomes.size());
  return d;
}

}  // namespace fls

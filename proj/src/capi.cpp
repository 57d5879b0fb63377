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

#include "fls/fls.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <memory>
#include <string>
#include <thread>

#include "fls/bounds.hpp"
#include "fls/config.hpp"
#include "fls/gates.hpp"
#include "fls/gaussian.hpp"
#include "fls/oracle.hpp"
#include "fls/sampler.hpp"
#include "fls/unraveling.hpp"

struct fls_model {
  fls::ExperimentConfig cfg;
};

struct fls_distribution {
  int modes = 0;
  std::vector<std::uint64_t> mask;
  std::vector<double> p;
  std::vector<double> se;
};

namespace {

thread_local std::string g_error;

fls_status code_of(fls::ErrorCode c) {
  using fls::ErrorCode;
  switch (c) {
    case ErrorCode::InvalidArgument: return FLS_ERR_INVALID_ARGUMENT;
    case ErrorCode::Schema:
    case ErrorCode::ScheduleGap: return FLS_ERR_SCHEMA;
    case ErrorCode::DimensionTooLarge: return FLS_ERR_DIMENSION;
    case ErrorCode::AmbiguousClass:
    case ErrorCode::NotEC1:
    case ErrorCode::NotEC3:
    case ErrorCode::UnclassifiedModel: return FLS_ERR_CLASSIFICATION;
    case ErrorCode::StepTooLarge: return FLS_ERR_STEP_TOO_LARGE;
    case ErrorCode::InfeasibleTarget: return FLS_ERR_INFEASIBLE;
    case ErrorCode::ToleranceNotMet:
    case ErrorCode::Numerical: return FLS_ERR_NUMERICAL;
  }
  return FLS_ERR_INTERNAL;
}

template <class F>
fls_status guard(F&& f) {
  g_error.clear();
  try {
    f();
    return FLS_OK;
  } catch (const fls::Error& e) {
    g_error = e.what();
    return code_of(e.code());
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return FLS_ERR_DIMENSION;
  } catch (const std::exception& e) {
    g_error = e.what();
    return FLS_ERR_INTERNAL;
  } catch (...) {
    g_error = "unknown failure";
    return FLS_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw fls::Error(fls::ErrorCode::InvalidArgument, what);
}

fls_distribution* dense_to_sparse(const fls::Distribution& d, const std::vector<double>* se) {
  auto* out = new fls_distribution;
  out->modes = d.modes;
  for (std::size_t r = 0; r < d.p.size(); ++r) {
    const double e = se && r < se->size() ? (*se)[r] : 0.0;
    if (d.p[r] == 0.0 && e == 0.0) continue;
    out->mask.push_back(r);
    out->p.push_back(d.p[r]);
    out->se.push_back(e);
  }
  return out;
}

fls::OutcomeDistribution unitary_distribution(const fls::Model& m) {
  if (!m.lindblad.empty())
    throw fls::Error(fls::ErrorCode::InvalidArgument, "the model has Lindblad operators; use trajectory simulation");
  const bool linear = m.hamiltonian.has_linear_terms();
  const auto h = linear ? fls::reduce_linear(m.hamiltonian) : m.hamiltonian;
  return fls::OutcomeDistribution(fls::propagate(h, 0.0, m.t_final), m.initial, linear);
}

fls::GateSpec to_spec(const fls_gate_spec* s) {
  require(s != nullptr, "gate spec is null");
  fls::GateSpec g;
  g.J = s->J;
  g.Gamma = s->Gamma;
  g.Gamma_prime = s->Gamma_prime;
  g.zeta = s->zeta;
  g.epsilon0 = s->epsilon0;
  g.t = s->t > 0.0 ? s->t : 0.0;
  return g;
}

int class_index(fls::ClassTag t) { return static_cast<int>(t); }

}  // namespace

extern "C" {

const char* fls_last_error(void) { return g_error.c_str(); }

const char* fls_version(void) { return FLS_VERSION; }

const char* fls_class_name(int tag) {
  if (tag < 0 || tag > 3) return "unknown";
  return fls::class_tag_name(static_cast<fls::ClassTag>(tag));
}

fls_status fls_model_from_json(const char* text, fls_model** out) {
  return guard([&] {
    require(text && out, "null argument");
    *out = nullptr;
    auto m = std::make_unique<fls_model>();
    m->cfg = fls::parse_config(text);
    *out = m.release();
  });
}

fls_status fls_model_from_file(const char* path, fls_model** out) {
  return guard([&] {
    require(path && out, "null argument");
    *out = nullptr;
    auto m = std::make_unique<fls_model>();
    m->cfg = fls::load_config(path);
    *out = m.release();
  });
}

void fls_model_free(fls_model* model) { delete model; }

fls_status fls_model_info_get(const fls_model* model, fls_model_info* info) {
  return guard([&] {
    require(model && info, "null argument");
    const auto& m = model->cfg.model;
    info->modes = m.modes();
    info->class_tag = class_index(m.lindblad.class_tag());
    info->mixed = m.lindblad.classification().mixed ? 1 : 0;
    info->has_seed = model->cfg.has_seed ? 1 : 0;
    info->seed = m.seed;
    info->t_final = m.t_final;
    info->target_epsilon = m.target_epsilon;
    info->config_hash = model->cfg.hash;
    info->needs_linear_ancilla = m.needs_linear_ancilla() ? 1 : 0;
    info->channels = m.lindblad.channels().size();
  });
}

fls_status fls_sample(const fls_model* model, uint64_t seed, size_t n, int threads, uint64_t* masks_out) {
  return guard([&] {
    require(model && (masks_out || n == 0), "null argument");
    const auto dist = unitary_distribution(model->cfg.model);
    const std::size_t chunk = 256;
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(std::max(1, threads)));
    auto worker = [&](int w) {
      try {
        for (std::size_t c = next++; c < n_chunks; c = next++)
          for (std::size_t i = c * chunk; i < std::min(n, (c + 1) * chunk); ++i) {
            auto rng = fls::trajectory_rng(seed, i);
            masks_out[i] = dist.sample(rng).mask();
          }
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
        next = n_chunks;
      }
    };
    if (threads <= 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w);
      for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  });
}

fls_status fls_enumerate(const fls_model* model, fls_distribution** out) {
  return guard([&] {
    require(model && out, "null argument");
    *out = nullptr;
    *out = dense_to_sparse(unitary_distribution(model->cfg.model).enumerate(), nullptr);
  });
}

fls_status fls_simulate(const fls_model* model, const fls_simulate_options* opts, fls_distribution** out,
                        fls_simulate_info* info) {
  return guard([&] {
    require(model && opts && out, "null argument");
    *out = nullptr;
    require(opts->trajectories > 0, "trajectory count must be positive");
    const auto& m = model->cfg.model;
    double dt = opts->dt;
    if (!(dt > 0.0)) dt = fls::choose_dt(m, m.t_final, opts->epsilon > 0.0 ? opts->epsilon : m.target_epsilon);
    const auto plan = fls::make_plan(m, m.t_final, dt, opts->trajectories, opts->seed);
    fls::RunOptions ro;
    ro.threads = std::max(1, opts->threads);
    ro.estimator = opts->estimator == FLS_ESTIMATOR_AVERAGE ? fls::Estimator::Average : fls::Estimator::Sample;
    const auto res = fls::run_trajectories(plan, m, ro);
    if (!res.mean.p.empty()) {
      *out = dense_to_sparse(res.mean, &res.stderr_);
    } else {
      auto outcomes = res.outcomes;
      std::sort(outcomes.begin(), outcomes.end());
      auto* d = new fls_distribution;
      d->modes = res.modes;
      const double nt = static_cast<double>(res.n);
      for (std::size_t i = 0; i < outcomes.size();) {
        std::size_t j = i;
        while (j < outcomes.size() && outcomes[j] == outcomes[i]) ++j;
        const double p = static_cast<double>(j - i) / nt;
        d->mask.push_back(outcomes[i]);
        d->p.push_back(p);
        d->se.push_back(nt > 1 ? std::sqrt(p * (1 - p) / (nt - 1)) : 0.0);
        i = j;
      }
      *out = d;
    }
    if (info) {
      info->dt = plan.dt;
      info->steps = plan.n_steps;
      info->ancilla_modes = plan.ancilla_count;
      info->trajectories = plan.n_trajectories;
    }
  });
}

fls_status fls_oracle(const fls_model* model, fls_distribution** out) {
  return guard([&] {
    require(model && out, "null argument");
    *out = nullptr;
    const auto& m = model->cfg.model;
    if (m.modes() > fls::oracle::kMaxEvolveModes)
      throw fls::Error(fls::ErrorCode::DimensionTooLarge, "dense reference is limited to " +
                                                              std::to_string(fls::oracle::kMaxEvolveModes) + " modes");
    *out = dense_to_sparse(fls::oracle::exact_distribution(m, m.t_final), nullptr);
  });
}

int fls_distribution_modes(const fls_distribution* d) { return d ? d->modes : 0; }

size_t fls_distribution_size(const fls_distribution* d) { return d ? d->p.size() : 0; }

fls_status fls_distribution_entry(const fls_distribution* d, size_t i, uint64_t* mask, double* p, double* se) {
  return guard([&] {
    require(d != nullptr, "null distribution");
    require(i < d->p.size(), "entry index out of range");
    if (mask) *mask = d->mask[i];
    if (p) *p = d->p[i];
    if (se) *se = d->se[i];
  });
}

void fls_distribution_free(fls_distribution* d) { delete d; }

fls_status fls_tvd(const double* p, const double* q, size_t n, double* out) {
  return guard([&] {
    require((p && q) || n == 0, "null argument");
    require(out != nullptr, "null argument");
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += std::abs(p[i] - q[i]);
    *out = 0.5 * s;
  });
}

fls_status fls_bound(const fls_model* model, double t, double target_epsilon, double dt, long trajectories,
                     fls_bound_report* out) {
  return guard([&] {
    require(model && out, "null argument");
    const auto& m = model->cfg.model;
    if (!(t > 0.0)) t = m.t_final;
    if (!(target_epsilon > 0.0)) target_epsilon = m.target_epsilon;
    if (!(dt > 0.0)) dt = fls::choose_dt(m, t, target_epsilon);
    const auto r = fls::bound_report(m, t, dt);
    const bool ancilla = !m.lindblad.classification().ec3.empty();
    const auto rt = fls::runtime_estimate(m.modes(), t, dt, std::max(1L, trajectories), ancilla);
    out->class_tag = class_index(r.class_tag);
    out->modes = r.modes;
    out->k_m = r.k_m;
    out->t = t;
    out->dt = dt;
    out->integral = r.integral;
    out->prefactor = r.prefactor;
    out->prefactor_literal = r.prefactor_literal;
    out->epsilon = r.epsilon;
    out->epsilon_literal = r.epsilon_literal;
    out->effective_modes = rt.effective_modes;
    out->runtime_per_trajectory = rt.per_trajectory;
    out->runtime_total = rt.total;
  });
}

fls_status fls_simulate_cz(const fls_gate_spec* spec, const char* scheme, fls_cz_report* out) {
  return guard([&] {
    require(scheme && out, "null argument");
    const auto r = fls::simulate_cz(to_spec(spec), fls::parse_gate_scheme(scheme));
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        out->coherence_re[4 * a + b] = r.coherence[a][b].real();
        out->coherence_im[4 * a + b] = r.coherence[a][b].imag();
      }
      out->survival[a] = r.survival[a];
      out->leakage[a] = r.leakage[a];
    }
    out->mean_leakage = r.mean_leakage;
    out->blocked_state = r.blocked_state;
    out->epsilon = r.epsilon;
    out->phase_11 = r.phase_11;
    out->fidelity_11 = r.fidelity_11;
    out->process_fidelity = r.process_fidelity;
    out->average_fidelity = r.average_fidelity;
  });
}

fls_status fls_leakage_nonhermitian(const fls_gate_spec* spec, int four_level, double* survival, double* epsilon) {
  return guard([&] {
    const auto r = fls::leakage_nonhermitian(to_spec(spec),
                                             four_level ? fls::LeakageModel::FourLevel : fls::LeakageModel::TwoLevel);
    if (survival) *survival = r.survival;
    if (epsilon) *epsilon = r.epsilon;
  });
}

fls_status fls_total_error(const fls_gate_spec* spec, double* epsilon) {
  return guard([&] {
    require(epsilon != nullptr, "null argument");
    *epsilon = fls::total_error(to_spec(spec));
  });
}

fls_status fls_optimal_time(const fls_gate_spec* spec, double* t, double* epsilon) {
  return guard([&] {
    const auto o = fls::optimal_time(to_spec(spec));
    if (t) *t = o.t;
    if (epsilon) *epsilon = o.epsilon;
  });
}

const char* fls_regime_name(int regime) {
  switch (regime) {
    case FLS_REGIME_HARD: return "hard";
    case FLS_REGIME_INCONCLUSIVE: return "inconclusive";
    case FLS_REGIME_EC1_EASY: return "EC1-easy";
  }
  return "unknown";
}

fls_status fls_sweep_hardness(double ratio_min, double ratio_max, int points, double p0, size_t capacity,
                              double* ratio, double* epsilon, int* regime, size_t* count) {
  return guard([&] {
    require(count != nullptr, "null argument");
    const auto pts = fls::sweep_hardness_diagram(ratio_min, ratio_max, points, p0);
    *count = pts.size();
    for (std::size_t i = 0; i < std::min(capacity, pts.size()); ++i) {
      if (ratio) ratio[i] = pts[i].ratio;
      if (epsilon) epsilon[i] = pts[i].epsilon;
      if (regime)
        regime[i] = pts[i].label == "hard" ? FLS_REGIME_HARD
                    : pts[i].label == "EC1-easy" ? FLS_REGIME_EC1_EASY
                                                 : FLS_REGIME_INCONCLUSIVE;
    }
  });
}

}  // extern "C"

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

// Command-line driver. Talks to the simulator only through the C interface.
#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fls/fls.h"
#include "json.hpp"

namespace {

using nlohmann::ordered_json;

struct Failure {
  int code;
  std::string message;
};

void check(fls_status s) {
  if (s != FLS_OK) throw Failure{static_cast<int>(s), fls_last_error()};
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string bits(std::uint64_t mask, int modes) {
  std::string s(static_cast<std::size_t>(modes), '0');
  for (int n = 0; n < modes; ++n)
    if ((mask >> n) & 1u) s[static_cast<std::size_t>(n)] = '1';
  return s;
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Writes to --out when given, else stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw Failure{FLS_ERR_INVALID_ARGUMENT, "cannot open output file '" + path + "'"};
    }
  }
  std::ostream& out() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void metadata(std::ostream& os, std::uint64_t hash) {
  os << "# config_hash=" << hex(hash) << " version=" << fls_version() << "\n";
}

struct ModelPtr {
  fls_model* p = nullptr;
  ~ModelPtr() { fls_model_free(p); }
};

struct DistPtr {
  fls_distribution* p = nullptr;
  ~DistPtr() { fls_distribution_free(p); }
};

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("FLS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    throw Failure{FLS_ERR_INVALID_ARGUMENT, "FLS_THREADS must be a positive integer"};
  }
  return 1;
}

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  long trajectories = 1000;
  std::string dt = "auto";
  double epsilon = 0.0;
  int threads = 0;
  std::string out;
};

void load(const Common& c, ModelPtr& m, fls_model_info& info) {
  check(fls_model_from_file(c.config.c_str(), &m.p));
  check(fls_model_info_get(m.p, &info));
}

std::uint64_t seed_of(const Common& c, const fls_model_info& info) {
  if (c.seed) return *c.seed;
  if (info.has_seed) return info.seed;
  throw Failure{FLS_ERR_SCHEMA, c.config + ": stochastic commands need a seed (config 'seed' or --seed)"};
}

void write_distribution(std::ostream& os, const fls_distribution* d, bool with_stderr) {
  const int modes = fls_distribution_modes(d);
  os << (with_stderr ? "bitstring,probability,stderr\n" : "bitstring,probability\n");
  for (std::size_t i = 0; i < fls_distribution_size(d); ++i) {
    std::uint64_t mask = 0;
    double p = 0.0, se = 0.0;
    check(fls_distribution_entry(d, i, &mask, &p, &se));
    os << bits(mask, modes) << "," << num(p);
    if (with_stderr) os << "," << num(se);
    os << "\n";
  }
}

int cmd_sample(const Common& c, bool enumerate) {
  ModelPtr m;
  fls_model_info info{};
  load(c, m, info);
  Sink sink(c.out);
  auto& os = sink.out();
  if (enumerate) {
    DistPtr d;
    check(fls_enumerate(m.p, &d.p));
    write_distribution(os, d.p, false);
  } else {
    if (c.trajectories <= 0) throw Failure{FLS_ERR_INVALID_ARGUMENT, "--trajectories must be positive"};
    std::vector<std::uint64_t> masks(static_cast<std::size_t>(c.trajectories));
    check(fls_sample(m.p, seed_of(c, info), masks.size(), resolve_threads(c.threads), masks.data()));
    os << "bitstring\n";
    for (auto x : masks) os << bits(x, info.modes) << "\n";
  }
  metadata(os, info.config_hash);
  return 0;
}

int cmd_simulate(const Common& c, const std::string& estimator) {
  ModelPtr m;
  fls_model_info info{};
  load(c, m, info);
  fls_simulate_options o{};
  if (c.dt != "auto") {
    try {
      std::size_t used = 0;
      o.dt = std::stod(c.dt, &used);
      if (used != c.dt.size() || !(o.dt > 0.0)) throw std::invalid_argument("dt");
    } catch (const std::exception&) {
      throw Failure{FLS_ERR_INVALID_ARGUMENT, "--dt must be 'auto' or a positive number"};
    }
  }
  o.epsilon = c.epsilon;
  o.trajectories = c.trajectories;
  o.seed = seed_of(c, info);
  o.threads = resolve_threads(c.threads);
  if (estimator == "sample")
    o.estimator = FLS_ESTIMATOR_SAMPLE;
  else if (estimator == "average")
    o.estimator = FLS_ESTIMATOR_AVERAGE;
  else
    throw Failure{FLS_ERR_INVALID_ARGUMENT, "--estimator must be 'sample' or 'average'"};
  DistPtr d;
  fls_simulate_info si{};
  check(fls_simulate(m.p, &o, &d.p, &si));
  Sink sink(c.out);
  write_distribution(sink.out(), d.p, true);
  metadata(sink.out(), info.config_hash);
  std::cerr << "dt=" << num(si.dt) << " steps=" << si.steps << " ancilla_modes=" << si.ancilla_modes
            << " trajectories=" << si.trajectories << "\n";
  return 0;
}

int cmd_oracle(const Common& c) {
  ModelPtr m;
  fls_model_info info{};
  load(c, m, info);
  DistPtr d;
  check(fls_oracle(m.p, &d.p));
  Sink sink(c.out);
  write_distribution(sink.out(), d.p, false);
  metadata(sink.out(), info.config_hash);
  return 0;
}

std::map<std::string, double> read_distribution(const std::string& path, std::size_t& width) {
  std::ifstream in(path);
  if (!in) throw Failure{FLS_ERR_INVALID_ARGUMENT, "cannot open '" + path + "'"};
  std::map<std::string, double> out;
  std::string line;
  int lineno = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("bitstring", 0) == 0) continue;
    }
    std::stringstream ss(line);
    std::string key, value;
    std::getline(ss, key, ',');
    std::getline(ss, value, ',');
    const auto where = path + ":" + std::to_string(lineno) + ": ";
    if (key.empty() || key.find_first_not_of("01") != std::string::npos)
      throw Failure{FLS_ERR_SCHEMA, where + "expected a 0/1 bit string"};
    if (width == 0) width = key.size();
    if (key.size() != width) throw Failure{FLS_ERR_SCHEMA, where + "bit strings differ in length"};
    try {
      out[key] += std::stod(value);
    } catch (const std::exception&) {
      throw Failure{FLS_ERR_SCHEMA, where + "expected a probability"};
    }
  }
  return out;
}

int cmd_compare(const std::string& a, const std::string& b) {
  std::size_t width = 0;
  const auto p = read_distribution(a, width);
  const auto q = read_distribution(b, width);
  std::map<std::string, std::pair<double, double>> all;
  for (const auto& [k, v] : p) all[k].first = v;
  for (const auto& [k, v] : q) all[k].second = v;
  std::vector<double> x, y;
  for (const auto& [k, v] : all) {
    x.push_back(v.first);
    y.push_back(v.second);
  }
  double t = 0.0;
  check(fls_tvd(x.data(), y.data(), x.size(), &t));
  std::cout << num(t) << "\n";
  return 0;
}

int cmd_bound(const Common& c, double t) {
  ModelPtr m;
  fls_model_info info{};
  load(c, m, info);
  double dt = 0.0;
  if (c.dt != "auto") dt = std::stod(c.dt);
  fls_bound_report r{};
  check(fls_bound(m.p, t, c.epsilon, dt, c.trajectories, &r));
  ordered_json j;
  j["class"] = fls_class_name(r.class_tag);
  j["L"] = r.modes;
  j["k_m"] = r.k_m;
  j["t"] = r.t;
  j["dt"] = r.dt;
  j["steps"] = static_cast<long>(std::llround(r.t / r.dt));
  j["epsilon_bound"] = r.epsilon;
  j["epsilon_bound_literal_prefactor"] = r.epsilon_literal;
  j["correction_integral"] = r.integral;
  j["prefactor"] = r.prefactor;
  j["prefactor_literal"] = r.prefactor_literal;
  j["runtime"] = {{"effective_modes", r.effective_modes},
                  {"trajectories", c.trajectories},
                  {"per_trajectory", r.runtime_per_trajectory},
                  {"total", r.runtime_total}};
  j["config_hash"] = hex(info.config_hash);
  j["version"] = fls_version();
  Sink sink(c.out);
  sink.out() << j.dump(2) << "\n";
  return 0;
}

int cmd_gate(const std::string& scheme, fls_gate_spec spec, const std::string& out) {
  fls_cz_report r{};
  check(fls_simulate_cz(&spec, scheme.c_str(), &r));
  double s2 = 0.0, e2 = 0.0, s4 = 0.0, e4 = 0.0, total = 0.0;
  check(fls_leakage_nonhermitian(&spec, 0, &s2, &e2));
  check(fls_leakage_nonhermitian(&spec, 1, &s4, &e4));
  check(fls_total_error(&spec, &total));
  ordered_json j;
  j["scheme"] = scheme;
  j["J"] = spec.J;
  j["Gamma"] = spec.Gamma;
  j["gamma_ratio"] = spec.Gamma / spec.J;
  j["Gamma_prime"] = spec.Gamma_prime;
  j["zeta"] = spec.zeta;
  j["epsilon0"] = spec.epsilon0;
  const char* names[4] = {"00", "01", "10", "11"};
  for (int a = 0; a < 4; ++a) {
    j["survival"][names[a]] = r.survival[a];
    j["leakage"][names[a]] = r.leakage[a];
  }
  j["mean_leakage"] = r.mean_leakage;
  j["blocked_state"] = names[r.blocked_state];
  j["epsilon"] = r.epsilon;
  j["phase_11"] = r.phase_11;
  j["fidelity_11"] = r.fidelity_11;
  j["process_fidelity"] = r.process_fidelity;
  j["average_fidelity"] = r.average_fidelity;
  j["nonhermitian"] = {{"two_level_epsilon", e2}, {"four_level_epsilon", e4}};
  j["total_error_model"] = total;
  j["version"] = fls_version();
  Sink sink(out);
  sink.out() << j.dump(2) << "\n";
  return 0;
}

int cmd_sweep(double p0, double rmin, double rmax, int points, const std::string& out) {
  std::size_t count = 0;
  check(fls_sweep_hardness(rmin, rmax, points, p0, 0, nullptr, nullptr, nullptr, &count));
  std::vector<double> ratio(count), eps(count);
  std::vector<int> regime(count);
  check(fls_sweep_hardness(rmin, rmax, points, p0, count, ratio.data(), eps.data(), regime.data(), &count));
  ordered_json params{{"command", "sweep"}, {"p0", p0}, {"ratio_min", rmin}, {"ratio_max", rmax}, {"points", points}};
  Sink sink(out);
  auto& os = sink.out();
  os << "ratio,epsilon,label\n";
  for (std::size_t i = 0; i < count; ++i) os << num(ratio[i]) << "," << num(eps[i]) << "," << fls_regime_name(regime[i]) << "\n";
  metadata(os, fnv1a64(params.dump()));
  return 0;
}

int cmd_fig4b(const std::string& table, double gamma_prime, double epsilon0, const std::string& out) {
  std::ifstream in(table);
  if (!in) throw Failure{FLS_ERR_INVALID_ARGUMENT, "cannot open table '" + table + "'"};
  std::string line, text;
  int lineno = 0;
  bool header = true;
  std::vector<std::array<double, 3>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    text += line + "\n";
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::array<double, 3> r{};
    std::string cell;
    bool ok = true;
    for (int k = 0; k < 3; ++k) {
      if (!std::getline(ss, cell, ',')) {
        ok = false;
        break;
      }
      try {
        std::size_t used = 0;
        r[static_cast<std::size_t>(k)] = std::stod(cell, &used);
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok && header) {
      header = false;
      continue;
    }
    header = false;
    if (!ok) throw Failure{FLS_ERR_SCHEMA, table + ":" + std::to_string(lineno) + ": expected B,Gamma,zeta"};
    rows.push_back(r);
  }
  ordered_json params{{"command", "fig4b"}, {"gamma_prime", gamma_prime}, {"epsilon0", epsilon0}, {"table", text}};
  Sink sink(out);
  auto& os = sink.out();
  os << "B,Gamma,zeta,t_opt,epsilon\n";
  for (const auto& r : rows) {
    fls_gate_spec s{1.0, r[1], gamma_prime, r[2], epsilon0, 0.0};
    double t = 0.0, e = 0.0;
    check(fls_optimal_time(&s, &t, &e));
    os << num(r[0]) << "," << num(r[1]) << "," << num(r[2]) << "," << num(t) << "," << num(e) << "\n";
  }
  metadata(os, fnv1a64(params.dump()));
  return 0;
}

void add_common(CLI::App* sub, Common& c, bool stochastic) {
  sub->add_option("--config", c.config, "experiment JSON file")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", c.out, "output file (default stdout)");
  if (stochastic) {
    sub->add_option("--seed", c.seed, "master seed (overrides the config)");
    sub->add_option("--threads", c.threads, "worker threads (default FLS_THREADS or 1)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free-fermion open-dynamics simulator"};
  app.set_version_flag("--version", std::string(fls_version()));
  app.require_subcommand(1);
  Common c;

  auto* sample = app.add_subcommand("sample", "sample outcomes of a unitary model");
  add_common(sample, c, true);
  bool enumerate = false;
  sample->add_option("--trajectories", c.trajectories, "number of samples");
  sample->add_flag("--enumerate", enumerate, "print the exact distribution instead of samples");

  auto* simulate = app.add_subcommand("simulate", "trajectory simulation of a dissipative model");
  add_common(simulate, c, true);
  std::string estimator = "sample";
  simulate->add_option("--trajectories", c.trajectories, "number of trajectories");
  simulate->add_option("--dt", c.dt, "timestep or 'auto'");
  simulate->add_option("--epsilon", c.epsilon, "target error for --dt auto");
  simulate->add_option("--estimator", estimator, "sample | average");

  auto* oracle = app.add_subcommand("oracle", "exact distribution from the dense master equation");
  add_common(oracle, c, false);

  auto* compare = app.add_subcommand("compare", "total variation distance between two distribution CSVs");
  std::string file_a, file_b;
  compare->add_option("a", file_a)->required()->check(CLI::ExistingFile);
  compare->add_option("b", file_b)->required()->check(CLI::ExistingFile);

  auto* bound = app.add_subcommand("bound", "error bound, timestep and runtime estimate");
  add_common(bound, c, false);
  double bound_t = 0.0;
  bound->add_option("--t", bound_t, "evolution time (default t_final)");
  bound->add_option("--epsilon", c.epsilon, "target error (default from config)");
  bound->add_option("--dt", c.dt, "timestep or 'auto'");
  bound->add_option("--trajectories", c.trajectories, "trajectory count for the runtime estimate");

  auto* gate = app.add_subcommand("gate-demo", "dissipative CZ gate on the dense model");
  std::string scheme = "zeno", gate_out;
  fls_gate_spec spec{1.0, 100.0, 0.0, 0.0, 0.0, 0.0};
  double gamma_ratio = 100.0;
  gate->add_option("--scheme", scheme, "zeno | atom1 | atom2");
  gate->add_option("--gamma-ratio", gamma_ratio, "Gamma / J");
  gate->add_option("--J", spec.J, "hopping amplitude");
  gate->add_option("--gamma-prime", spec.Gamma_prime, "background loss rate");
  gate->add_option("--zeta", spec.zeta, "interaction to loss ratio");
  gate->add_option("--epsilon0", spec.epsilon0, "phase-gate error (atom2)");
  gate->add_option("--out", gate_out, "output file (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "minimum gate error against Gamma'/Gamma");
  double p0 = 0.01, rmin = 1e-8, rmax = 1e8;
  int points = 161;
  std::string sweep_out;
  sweep->add_option("--p0", p0, "error-correction threshold");
  sweep->add_option("--ratio-min", rmin);
  sweep->add_option("--ratio-max", rmax);
  sweep->add_option("--points", points);
  sweep->add_option("--out", sweep_out, "output file (default stdout)");

  auto* fig = app.add_subcommand("fig4b", "optimal gate error for tabulated (B, Gamma, zeta)");
  std::string table, fig_out;
  double gp = 1e-2, eps0 = 0.0;
  fig->add_option("--table", table, "CSV with columns B,Gamma,zeta")->required()->check(CLI::ExistingFile);
  fig->add_option("--gamma-prime", gp, "background loss rate");
  fig->add_option("--epsilon0", eps0, "phase-gate error");
  fig->add_option("--out", fig_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*sample) return cmd_sample(c, enumerate);
    if (*simulate) return cmd_simulate(c, estimator);
    if (*oracle) return cmd_oracle(c);
    if (*compare) return cmd_compare(file_a, file_b);
    if (*bound) return cmd_bound(c, bound_t);
    if (*gate) {
      spec.Gamma = gamma_ratio * spec.J;
      return cmd_gate(scheme, spec, gate_out);
    }
    if (*sweep) return cmd_sweep(p0, rmin, rmax, points, sweep_out);
    if (*fig) return cmd_fig4b(table, gp, eps0, fig_out);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

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

#include <array>
#include <string>
#include <vector>

#include "fls/core.hpp"

namespace fls {

// Parameters of a dissipative CZ gate. t <= 0 selects the hopping time pi/J.
struct GateSpec {
  double J = 1.0;
  double Gamma = 100.0;
  double Gamma_prime = 0.0;
  double zeta = 0.0;
  double epsilon0 = 0.0;
  double t = 0.0;

  double gamma_ratio() const { return Gamma / J; }
  double duration() const;
  void validate() const;
};

enum class GateScheme { Zeno, Atom1, Atom2 };
GateScheme parse_gate_scheme(const std::string& s);
const char* gate_scheme_name(GateScheme s);

// Logical basis order 00, 01, 10, 11.
struct CzReport {
  GateScheme scheme = GateScheme::Zeno;
  // coherence[a][b] = <a| E(|a><b|) |b>
  std::array<std::array<Complex, 4>, 4> coherence{};
  std::array<double, 4> survival{};
  std::array<double, 4> leakage{};  // population outside the logical subspace
  double mean_leakage = 0.0;
  int blocked_state = 0;            // logical state protected by the blockade
  double epsilon = 0.0;             // (1 - survival[blocked_state]) / 2
  double phase_11 = 0.0;            // arg <11|E(|11><01|)|01>
  double fidelity_11 = 0.0;
  double process_fidelity = 0.0;
  double average_fidelity = 0.0;
};

CzReport simulate_cz(const GateSpec& spec, GateScheme scheme);

enum class LeakageModel { TwoLevel, FourLevel };

struct LeakageResult {
  double survival = 0.0;
  double epsilon = 0.0;  // survival = 1 - 2 epsilon
};

// Two-level model uses S = exp(-i pi H/J); the four-level model uses
// S = exp(-i H t) with E = zeta Gamma.
LeakageResult leakage_nonhermitian(const GateSpec& spec, LeakageModel which);

// eps0 + Gamma' t + 4 pi^2 / (Gamma t (1 + 4 zeta^2)) at t = spec.duration().
double total_error(const GateSpec& spec);
// Leading-order blockade error 4 pi^2 / (Gamma t (1 + 4 zeta^2)).
double blockade_error(const GateSpec& spec);

struct OptimalTime {
  double t = 0.0;
  double epsilon = 0.0;
};
OptimalTime optimal_time(const GateSpec& spec);

struct HardnessPoint {
  double ratio = 0.0;  // Gamma' / Gamma
  double epsilon = 0.0;
  std::string label;   // hard, inconclusive, EC1-easy
};

// min(sqrt(8 pi^2 x), sqrt(8 pi^2 / x)).
double min_gate_error(double ratio);
HardnessPoint hardness_point(double ratio, double p0);
// Log-spaced ratios in [ratio_min, ratio_max]; ratio 1 is always included when in range.
std::vector<HardnessPoint> sweep_hardness_diagram(double ratio_min, double ratio_max, int points, double p0);

struct OptimalErrorRow {
  double field = 0.0;
  double Gamma = 0.0;
  double zeta = 0.0;
  double t_opt = 0.0;
  double epsilon = 0.0;
};
// Optimal gate error for tabulated (field, Gamma, zeta) rows.
std::vector<OptimalErrorRow> optimal_error_table(const std::vector<std::array<double, 3>>& table, double gamma_prime,
                                          double epsilon0);

}  // namespace fls

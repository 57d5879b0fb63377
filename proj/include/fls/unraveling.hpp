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

#include <cstdint>
#include <random>
#include <vector>

#include "fls/core.hpp"
#include "fls/gaussian.hpp"
#include "fls/model.hpp"
#include "fls/sampler.hpp"

namespace fls {

struct TrajectoryPlan {
  double dt = 0.0;
  int n_steps = 0;
  double t_final = 0.0;
  ClassTag class_tag = ClassTag::EC1;
  std::uint64_t seed = 0;
  long n_trajectories = 0;
  int ancilla_count = 0;
};

// Rounds dt down so that an integer number of steps fills [0, t_final].
TrajectoryPlan make_plan(const Model& model, double t_final, double dt, long n_trajectories, std::uint64_t seed);

std::uint64_t splitmix64(std::uint64_t x);
std::mt19937_64 trajectory_rng(std::uint64_t master_seed, std::uint64_t index);

// H + sum_k (theta_k A_k + h.c.) with theta_k = xi_k / sqrt(dt); Hermitian terms use zeta_k = sqrt(2) Re xi_k.
HamiltonianSegment ec1_step_generator(const HamiltonianSegment& h, const std::vector<Ec1Term>& terms,
                                      const std::vector<Complex>& xi, double dt);

struct Ec2Draw {
  int jump = -1;
  double time = 0.0;
};
// rates are interval averages over the step.
Ec2Draw ec2_step_unitary(const std::vector<double>& rates, double t_start, double dt, std::mt19937_64& rng);

// Generator on `total_modes` modes: the system Hamiltonian, the scalar-part
// correction of each linear operator, and the coupling of the system to
// ancilla mode `ancilla` through K = f B c_a^dagger.
HamiltonianSegment ec3_step_generator(const HamiltonianSegment& h, const std::vector<LindbladOperator>& ops,
                                      const std::vector<double>& f, int ancilla, double dt, int total_modes);

struct TrajectoryLog {
  std::vector<Complex> ec1_noise;
  std::vector<double> ec3_noise;
  std::vector<Ec2Draw> ec2_draws;
};

// Stochastic free-fermion propagator of one trajectory on L + L_a (+1) modes.
GaussianPropagator assemble_trajectory(const Model& model, const TrajectoryPlan& plan, std::mt19937_64& rng,
                                       TrajectoryLog* log = nullptr);

enum class Estimator { Sample, Average };

struct RunOptions {
  int threads = 1;
  Estimator estimator = Estimator::Sample;
  bool keep_logs = false;
};

struct TrajectoryResult {
  int modes = 0;
  long n = 0;
  std::vector<std::uint64_t> outcomes;
  // Mean distribution and its standard error (L <= 14).
  Distribution mean;
  std::vector<double> stderr_;
  std::vector<TrajectoryLog> logs;
};

TrajectoryResult run_trajectories(const TrajectoryPlan& plan, const Model& model, const RunOptions& opts = {});

// Empirical frequencies of the sampled outcomes.
Distribution empirical_distribution(const TrajectoryResult& r);

}  // namespace fls

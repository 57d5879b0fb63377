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

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fls {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

enum class ErrorCode {
  InvalidArgument = 1,
  Schema = 2,
  DimensionTooLarge = 3,
  ScheduleGap = 4,
  AmbiguousClass = 5,
  NotEC1 = 6,
  NotEC3 = 7,
  StepTooLarge = 8,
  InfeasibleTarget = 9,
  ToleranceNotMet = 10,
  UnclassifiedModel = 11,
  Numerical = 12,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Occupation bit string. Bit n of mask is mode n; text form prints mode 0 first.
class FockConfiguration {
 public:
  FockConfiguration() = default;
  FockConfiguration(int modes, std::uint64_t mask);

  static FockConfiguration from_string(const std::string& bits);

  int modes() const { return modes_; }
  std::uint64_t mask() const { return mask_; }
  bool occupied(int n) const { return (mask_ >> n) & 1u; }
  int particle_number() const;
  std::string to_string() const;

  bool operator==(const FockConfiguration& o) const = default;

 private:
  int modes_ = 0;
  std::uint64_t mask_ = 0;
};

std::string mask_to_string(std::uint64_t mask, int modes);

// Probability table over all 2^L configurations, indexed by mask.
struct Distribution {
  int modes = 0;
  std::vector<double> p;

  double total() const;
};

}  // namespace fls

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

#include "fls/core.hpp"

#include <bit>
#include <numeric>

namespace fls {

FockConfiguration::FockConfiguration(int modes, std::uint64_t mask) : modes_(modes), mask_(mask) {
  if (modes < 0 || modes > 64) throw Error(ErrorCode::InvalidArgument, "mode count out of range");
  if (modes < 64 && (mask >> modes) != 0)
    throw Error(ErrorCode::InvalidArgument, "configuration has bits beyond its mode count");
}

FockConfiguration FockConfiguration::from_string(const std::string& bits) {
  if (bits.size() > 64) throw Error(ErrorCode::DimensionTooLarge, "bit string longer than 64 modes");
  std::uint64_t mask = 0;
  for (std::size_t n = 0; n < bits.size(); ++n) {
    if (bits[n] == '1')
      mask |= std::uint64_t{1} << n;
    else if (bits[n] != '0')
      throw Error(ErrorCode::Schema, "bit string may only contain 0 and 1: '" + bits + "'");
  }
  return FockConfiguration(static_cast<int>(bits.size()), mask);
}

int FockConfiguration::particle_number() const { return std::popcount(mask_); }

std::string FockConfiguration::to_string() const { return mask_to_string(mask_, modes_); }

std::string mask_to_string(std::uint64_t mask, int modes) {
  std::string s(static_cast<std::size_t>(modes), '0');
  for (int n = 0; n < modes; ++n)
    if ((mask >> n) & 1u) s[static_cast<std::size_t>(n)] = '1';
  return s;
}

double Distribution::total() const { return std::accumulate(p.begin(), p.end(), 0.0); }

}  // namespace fls

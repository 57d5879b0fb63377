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
#include <string>
#include <string_view>

#include "fls/model.hpp"

namespace fls {

// Parsed experiment file. Schema problems raise ErrorCode::Schema with a
// message of the form "line N: /json/pointer: what".
struct ExperimentConfig {
  Model model;
  bool has_seed = false;
  std::string canonical;  // sorted-key compact JSON
  std::uint64_t hash = 0;  // FNV-1a 64 of canonical
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(std::uint64_t h);

}  // namespace fls

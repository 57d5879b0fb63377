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

#include <string>

#include "doctest.h"
#include "fls/config.hpp"

using namespace fls;

namespace {

const char* kGood = R"({
  "L": 2,
  "t_final": 1.0,
  "seed": 7,
  "initial": "10",
  "hamiltonian": [{"terms": [{"ops": [["create", 0], ["annihilate", 1]], "coef": 1.0, "hc": true}]}],
  "lindblad": [{"terms": [{"ops": [["annihilate", 0]], "coef": 0.5}]}]
})";

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("valid configuration") {
    const auto c = parse_config(kGood);
    CHECK(c.model.modes() == 2);
    CHECK(c.has_seed);
    CHECK(c.model.seed == 7);
    CHECK(c.model.lindblad.class_tag() == ClassTag::EC3);
    CHECK(hash_hex(c.hash).size() == 16);
    CHECK(parse_config(kGood).hash == c.hash);
  }

  TEST_CASE("hash ignores formatting") {
    std::string compact = kGood;
    std::erase(compact, '\n');
    CHECK(parse_config(compact).hash == parse_config(kGood).hash);
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  }

  TEST_CASE("errors point at the offending line") {
    std::string bad = kGood;
    bad.replace(bad.find("\"10\""), 4, "\"1x\"");
    const auto msg = error_of(bad);
    CHECK(msg.find("line 5") != std::string::npos);
    CHECK(msg.find("/initial") != std::string::npos);
  }

  TEST_CASE("unknown keys and schema violations") {
    std::string bad = kGood;
    bad.replace(bad.find("\"seed\""), 6, "\"sed\"");
    CHECK(error_of(bad).find("line 4") != std::string::npos);
    CHECK(!error_of(R"({"L": 0, "t_final": 1, "initial": ""})").empty());
    CHECK(!error_of(R"({"L": 2, "t_final": -1, "initial": "10"})").empty());
    CHECK(error_of("{\n  \"L\": 2,\n  oops\n}").find("3:") != std::string::npos);
  }

  TEST_CASE("non-Hermitian Hamiltonian terms are rejected") {
    const auto msg = error_of(R"({
  "L": 1, "t_final": 1, "initial": "0",
  "hamiltonian": [{"terms": [{"ops": [["create", 0]], "coef": 1.0}]}]
})");
    CHECK(!msg.empty());
  }
}

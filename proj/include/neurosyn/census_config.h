// Copyright 2026 The Neurosyn Authors.
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

// Census configurations: a universe, a library of named signatures and a
// target type.
//
//   {"schema": "neurosyn.census_config/1",
//    "universe": {"tensors": ["real[8][8]", ...], "adts": ["list"]},
//    "library": [{"name": "cnn", "signature": "real[8][8] -> real[16]"}],
//    "type": "list<real[8][8]> -> real[1]",
//    "grammar": {"conv_repeats": [1]}}

#ifndef NEUROSYN_CENSUS_CONFIG_H_
#define NEUROSYN_CENSUS_CONFIG_H_

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "neurosyn/topdown.h"

namespace neurosyn {

struct CensusConfig {
  UniverseConfig universe;
  std::vector<std::pair<std::string, Type>> library;
  std::optional<Type> type;
  GrammarConfig grammar;
};

// Throws std::invalid_argument on malformed configurations.
CensusConfig ParseCensusConfig(const nlohmann::json& j);
CensusConfig ReadCensusConfig(const std::filesystem::path& path);

// Untrained frozen modules with the configured names and signatures; the
// census only needs their types.
Library BuildCensusLibrary(const CensusConfig& config);

}  // namespace neurosyn

#endif  // NEUROSYN_CENSUS_CONFIG_H_

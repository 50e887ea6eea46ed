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

#include "neurosyn/census_config.h"

#include <fstream>

namespace neurosyn {

CensusConfig ParseCensusConfig(const nlohmann::json& j) {
  CensusConfig c;
  try {
    if (!j.is_object()) throw std::invalid_argument("census config must be an object");
    for (const auto& [key, value] : j.items()) {
      if (key != "schema" && key != "universe" && key != "library" && key != "type" &&
          key != "grammar") {
        throw std::invalid_argument("unknown key '" + key + "' in census config");
      }
    }
    const nlohmann::json& u = j.at("universe");
    c.universe.tensors.clear();
    for (const auto& t : u.at("tensors")) {
      Type ty = ParseType(t.get<std::string>());
      if (!ty.is_tensor()) throw std::invalid_argument(t.dump() + " is not a tensor type");
      c.universe.tensors.push_back(ty.tensor());
    }
    if (u.contains("adts")) {
      c.universe.adts.clear();
      for (const auto& a : u.at("adts")) {
        std::string s = a.get<std::string>();
        if (s == "list") {
          c.universe.adts.push_back(AdtKind::kList);
        } else if (s == "graph") {
          c.universe.adts.push_back(AdtKind::kGraph);
        } else {
          throw std::invalid_argument("unknown ADT '" + s + "'");
        }
      }
    }
    if (u.contains("max_function_depth")) {
      c.universe.max_function_depth = u.at("max_function_depth").get<int>();
    }
    if (j.contains("library")) {
      for (const auto& e : j.at("library")) {
        c.library.emplace_back(e.at("name").get<std::string>(),
                               ParseType(e.at("signature").get<std::string>()));
      }
    }
    if (j.contains("type")) c.type = ParseType(j.at("type").get<std::string>());
    if (j.contains("grammar")) {
      const auto& g = j.at("grammar");
      if (g.contains("conv_repeats")) {
        c.grammar.conv_repeats = g.at("conv_repeats").get<std::vector<int>>();
      }
      if (g.contains("fresh_modules")) c.grammar.fresh_modules = g.at("fresh_modules").get<bool>();
      if (g.contains("zeros")) c.grammar.zeros = g.at("zeros").get<bool>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed census config: ") + e.what());
  }
  return c;
}

CensusConfig ReadCensusConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open census config " + path.string());
  try {
    return ParseCensusConfig(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("malformed census config " + path.string() + ": " + e.what());
  }
}

Library BuildCensusLibrary(const CensusConfig& config) {
  std::vector<ModulePtr> modules;
  std::uint64_t seed = 1;
  for (const auto& [name, sig] : config.library) {
    modules.push_back(InstantiateFor(sig, false, {}, seed++, name));
  }
  Library lib;
  lib.AddFrozen(modules);
  return lib;
}

}  // namespace neurosyn

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

#ifndef NEUROSYN_LIBRARY_H_
#define NEUROSYN_LIBRARY_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "neurosyn/modules.h"
#include "neurosyn/syntax.h"

namespace neurosyn {

inline constexpr std::string_view kLibraryPrefix = "lib.";

// Ordered, append-only collection of frozen modules. Copies share the
// (immutable) module objects, so an earlier library is always a prefix of
// a later one.
class Library {
 public:
  const std::vector<ModulePtr>& modules() const { return modules_; }
  std::size_t size() const { return modules_.size(); }

  // Freezes each module, prefixes its name with "lib." unless already
  // prefixed, and appends it. Throws std::invalid_argument on a duplicate
  // name; nothing is appended in that case.
  void AddFrozen(const std::vector<ModulePtr>& modules);

  ModulePtr Find(std::string_view name) const;
  std::vector<ModulePtr> Matching(const Type& signature) const;
  NameResolver Resolver() const;

  // library.json (ordered entries) plus checkpoints/<name>/.
  void Write(const std::filesystem::path& dir) const;
  static Library Read(const std::filesystem::path& dir);

 private:
  std::vector<ModulePtr> modules_;
};

nlohmann::json HyperToJson(const ModuleHyper& h);
// Throws nlohmann::json exceptions on missing or mistyped keys.
ModuleHyper HyperFromJson(const nlohmann::json& j);

// Frozen library modules of exactly `signature`, followed by one fresh
// unfrozen template of the selected kind. Empty when no template fits.
std::vector<ModulePtr> FreshCandidates(const Library& library,
                                       const Type& signature,
                                       const ModuleHyper& hyper,
                                       std::uint64_t seed,
                                       bool classification = false);

}  // namespace neurosyn

#endif  // NEUROSYN_LIBRARY_H_

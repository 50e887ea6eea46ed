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

#include "neurosyn/library.h"

#include <fstream>
#include <set>

#include "json.hpp"

namespace neurosyn {

namespace {

std::string Prefixed(const std::string& name) {
  if (name.rfind(kLibraryPrefix, 0) == 0) return name;
  return std::string(kLibraryPrefix) + name;
}

}  // namespace

nlohmann::json HyperToJson(const ModuleHyper& h) {
  return {{"mlp_hidden", h.mlp_hidden},
          {"cnn_channels", h.cnn_channels},
          {"cnn_kernel", h.cnn_kernel},
          {"lstm_hidden", h.lstm_hidden},
          {"regularizers", h.regularizers},
          {"dropout", h.dropout}};
}

ModuleHyper HyperFromJson(const nlohmann::json& j) {
  ModuleHyper h;
  h.mlp_hidden = j.at("mlp_hidden").get<int>();
  h.cnn_channels = j.at("cnn_channels").get<std::vector<int>>();
  h.cnn_kernel = j.at("cnn_kernel").get<int>();
  h.lstm_hidden = j.at("lstm_hidden").get<int>();
  h.regularizers = j.at("regularizers").get<bool>();
  h.dropout = j.at("dropout").get<Real>();
  return h;
}

void Library::AddFrozen(const std::vector<ModulePtr>& modules) {
  std::set<std::string> seen;
  for (const ModulePtr& m : modules_) seen.insert(m->name());
  for (const ModulePtr& m : modules) {
    if (m->name().empty()) throw std::invalid_argument("cannot add an unnamed module");
    if (!seen.insert(Prefixed(m->name())).second) {
      throw std::invalid_argument("duplicate library name '" + Prefixed(m->name()) + "'");
    }
  }
  for (const ModulePtr& m : modules) {
    m->set_name(Prefixed(m->name()));
    m->Freeze();
    modules_.push_back(m);
  }
}

ModulePtr Library::Find(std::string_view name) const {
  for (const ModulePtr& m : modules_) {
    if (m->name() == name) return m;
  }
  return nullptr;
}

std::vector<ModulePtr> Library::Matching(const Type& signature) const {
  std::vector<ModulePtr> out;
  for (const ModulePtr& m : modules_) {
    if (m->signature() == signature) out.push_back(m);
  }
  return out;
}

NameResolver Library::Resolver() const {
  // Copy the pointers so the resolver stays valid if the library grows.
  std::vector<ModulePtr> mods = modules_;
  return [mods](std::string_view name) -> std::optional<NameInfo> {
    for (const ModulePtr& m : mods) {
      if (m->name() == name) return NameInfo{m->signature(), false};
    }
    return std::nullopt;
  };
}

void Library::Write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir / "checkpoints");
  nlohmann::json manifest;
  manifest["schema"] = "neurosyn.library/1";
  manifest["entries"] = nlohmann::json::array();
  for (const ModulePtr& m : modules_) {
    std::string ckpt = "checkpoints/" + m->name();
    manifest["entries"].push_back({{"name", m->name()},
                                   {"signature", m->signature().ToString()},
                                   {"kind", ToString(m->kind())},
                                   {"activation", ToString(m->activation())},
                                   {"frozen", m->frozen()},
                                   {"hyper", HyperToJson(m->hyper())},
                                   {"checkpoint", ckpt}});
    WriteCheckpoint(m->params(), dir / ckpt);
  }
  std::ofstream out(dir / "library.json", std::ios::trunc);
  out << manifest.dump(2) << "\n";
  if (!out) throw std::runtime_error("cannot write " + (dir / "library.json").string());
}

Library Library::Read(const std::filesystem::path& dir) {
  std::ifstream in(dir / "library.json");
  if (!in) throw std::runtime_error("missing library manifest in " + dir.string());
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("corrupt library manifest: " + std::string(e.what()));
  }
  Library lib;
  for (const auto& e : manifest.at("entries")) {
    std::string name = e.at("name").get<std::string>();
    ParamStore ckpt = ReadCheckpoint(dir / e.at("checkpoint").get<std::string>());
    ModulePtr m = Rebuild(name, ParseType(e.at("signature").get<std::string>()),
                          ParseModuleKind(e.at("kind").get<std::string>()),
                          ParseActivation(e.at("activation").get<std::string>()),
                          HyperFromJson(e.at("hyper")), ckpt);
    lib.AddFrozen({m});
  }
  return lib;
}

std::vector<ModulePtr> FreshCandidates(const Library& library,
                                       const Type& signature,
                                       const ModuleHyper& hyper,
                                       std::uint64_t seed,
                                       bool classification) {
  std::vector<ModulePtr> out = library.Matching(signature);
  if (IsModuleSignature(signature)) {
    out.push_back(InstantiateFor(signature, classification, hyper, seed));
  }
  return out;
}

}  // namespace neurosyn

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

#include "neurosyn/params.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "json.hpp"

namespace neurosyn {

static_assert(std::endian::native == std::endian::little,
              "payloads are written in host order");

namespace {

const char* DtypeName() { return sizeof(Real) == 8 ? "float64" : "float32"; }

}  // namespace

Var ParamStore::Add(const std::string& name, Tensor init) {
  if (frozen_) throw FrozenParameterError("cannot add '" + name + "' to a frozen store");
  for (const auto& [n, v] : entries_) {
    if (n == name) throw std::invalid_argument("duplicate parameter '" + name + "'");
  }
  Var v(std::move(init), true);
  entries_.emplace_back(name, v);
  return v;
}

const Var& ParamStore::Get(const std::string& name) const {
  for (const auto& [n, v] : entries_) {
    if (n == name) return v;
  }
  throw std::out_of_range("no parameter '" + name + "'");
}

void ParamStore::Set(const std::string& name, const Tensor& value) {
  if (frozen_) {
    throw FrozenParameterError("parameter '" + name + "' is frozen");
  }
  Var v = Get(name);
  if (v.shape() != value.shape()) ThrowShapeMismatch("set", v.shape(), value.shape());
  v.mutable_value() = value;
}

void ParamStore::Freeze() {
  frozen_ = true;
  for (auto& [n, v] : entries_) {
    v.set_requires_grad(false);
    v.ZeroGrad();
  }
}

long ParamStore::NumParams() const {
  long n = 0;
  for (const auto& [name, v] : entries_) n += v.value().size();
  return n;
}

std::vector<Var> ParamStore::Trainable() const {
  std::vector<Var> out;
  if (frozen_) return out;
  for (const auto& [n, v] : entries_) out.push_back(v);
  return out;
}

void ParamStore::ZeroGrad() {
  for (auto& [n, v] : entries_) v.ZeroGrad();
}

ParamStore ParamStore::Clone() const {
  ParamStore copy;
  for (const auto& [n, v] : entries_) {
    copy.entries_.emplace_back(n, Var(v.value(), !frozen_));
  }
  copy.frozen_ = frozen_;
  return copy;
}

std::vector<Tensor> ParamStore::Snapshot() const {
  std::vector<Tensor> out;
  for (const auto& [n, v] : entries_) out.push_back(v.value());
  return out;
}

void ParamStore::Restore(const std::vector<Tensor>& snapshot) {
  if (frozen_) throw FrozenParameterError("cannot restore a frozen store");
  if (snapshot.size() != entries_.size()) {
    throw std::invalid_argument("snapshot does not match the store");
  }
  for (std::size_t i = 0; i < snapshot.size(); ++i) {
    Var v = entries_[i].second;
    if (v.shape() != snapshot[i].shape()) {
      ThrowShapeMismatch("restore", v.shape(), snapshot[i].shape());
    }
    v.mutable_value() = snapshot[i];
  }
}

std::string SerializeValues(const ParamStore& store) {
  std::string bytes;
  for (const auto& [n, v] : store.entries()) {
    const auto& vals = v.value().values();
    bytes.append(reinterpret_cast<const char*>(vals.data()),
                 vals.size() * sizeof(Real));
  }
  return bytes;
}

void Optimizer::ZeroGrad() {
  for (Var& p : params_) p.ZeroGrad();
}

Sgd::Sgd(std::vector<Var> params, Real lr) : Optimizer(std::move(params)), lr_(lr) {
  if (!(lr > 0)) throw std::invalid_argument("learning rate must be > 0");
}

void Sgd::Step() {
  for (Var& p : params_) {
    if (!p.requires_grad() || !p.has_grad()) continue;
    Tensor g = p.grad();
    Tensor& w = p.mutable_value();
    for (long i = 0; i < w.size(); ++i) w[i] -= lr_ * g[i];
  }
}

Adam::Adam(std::vector<Var> params, AdamConfig config)
    : Optimizer(std::move(params)), config_(config) {
  if (!(config.lr > 0)) throw std::invalid_argument("learning rate must be > 0");
  for (const Var& p : params_) {
    m_.emplace_back(p.shape());
    v_.emplace_back(p.shape());
  }
}

void Adam::Step() {
  ++t_;
  const Real c1 = 1 - std::pow(config_.beta1, static_cast<Real>(t_));
  const Real c2 = 1 - std::pow(config_.beta2, static_cast<Real>(t_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    Var& p = params_[k];
    if (!p.requires_grad() || !p.has_grad()) continue;
    const Tensor& g = p.node()->grad;
    Tensor& w = p.mutable_value();
    Tensor& m = m_[k];
    Tensor& v = v_[k];
    for (long i = 0; i < w.size(); ++i) {
      m[i] = config_.beta1 * m[i] + (1 - config_.beta1) * g[i];
      v[i] = config_.beta2 * v[i] + (1 - config_.beta2) * g[i] * g[i];
      Real mhat = m[i] / c1;
      Real vhat = v[i] / c2;
      w[i] -= config_.lr * mhat / (std::sqrt(vhat) + config_.eps);
    }
  }
}

void WriteCheckpoint(const ParamStore& store, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["schema"] = "neurosyn.checkpoint/1";
  manifest["dtype"] = DtypeName();
  manifest["frozen"] = store.frozen();
  manifest["tensors"] = nlohmann::json::array();
  int index = 0;
  for (const auto& [name, v] : store.entries()) {
    std::string file = std::to_string(index++) + ".bin";
    manifest["tensors"].push_back(
        {{"name", name}, {"shape", v.shape()}, {"file", file}});
    std::ofstream out(dir / file, std::ios::binary | std::ios::trunc);
    const auto& vals = v.value().values();
    out.write(reinterpret_cast<const char*>(vals.data()),
              static_cast<std::streamsize>(vals.size() * sizeof(Real)));
    if (!out) throw std::runtime_error("cannot write " + (dir / file).string());
  }
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  out << manifest.dump(2) << "\n";
  if (!out) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
}

ParamStore ReadCheckpoint(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw std::runtime_error("missing checkpoint manifest in " + dir.string());
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("corrupt checkpoint manifest: " + std::string(e.what()));
  }
  if (manifest.value("dtype", "") != DtypeName()) {
    throw std::runtime_error("checkpoint dtype " + manifest.value("dtype", "?") +
                             " does not match this build (" + DtypeName() + ")");
  }
  ParamStore store;
  for (const auto& t : manifest.at("tensors")) {
    Shape shape = t.at("shape").get<Shape>();
    Tensor value(shape);
    std::ifstream payload(dir / t.at("file").get<std::string>(), std::ios::binary);
    payload.read(reinterpret_cast<char*>(value.data()),
                 static_cast<std::streamsize>(value.size() * sizeof(Real)));
    if (!payload || payload.peek() != std::char_traits<char>::eof()) {
      throw std::runtime_error("checkpoint payload for '" +
                               t.at("name").get<std::string>() +
                               "' is truncated or oversized");
    }
    store.Add(t.at("name").get<std::string>(), std::move(value));
  }
  if (manifest.value("frozen", false)) store.Freeze();
  return store;
}

}  // namespace neurosyn

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

#ifndef NEUROSYN_PARAMS_H_
#define NEUROSYN_PARAMS_H_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "neurosyn/autodiff.h"

namespace neurosyn {

class FrozenParameterError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Named parameters of one module. Freezing is per store and permanent.
class ParamStore {
 public:
  Var Add(const std::string& name, Tensor init);

  const std::vector<std::pair<std::string, Var>>& entries() const {
    return entries_;
  }
  const Var& Get(const std::string& name) const;
  // Replaces a value; throws FrozenParameterError on frozen stores.
  void Set(const std::string& name, const Tensor& value);

  bool frozen() const { return frozen_; }
  void Freeze();

  long NumParams() const;
  // Parameters that still receive updates (empty once frozen).
  std::vector<Var> Trainable() const;
  void ZeroGrad();

  // Deep copy; the copy shares no tensors with this store.
  ParamStore Clone() const;
  // Values only, in entry order.
  std::vector<Tensor> Snapshot() const;
  void Restore(const std::vector<Tensor>& snapshot);

 private:
  std::vector<std::pair<std::string, Var>> entries_;
  bool frozen_ = false;
};

// Raw little-endian bytes of every tensor, in entry order.
std::string SerializeValues(const ParamStore& store);

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  // Updates every parameter that requires a gradient; others are skipped.
  virtual void Step() = 0;
  void ZeroGrad();

 protected:
  explicit Optimizer(std::vector<Var> params) : params_(std::move(params)) {}
  std::vector<Var> params_;
};

class Sgd : public Optimizer {
 public:
  Sgd(std::vector<Var> params, Real lr);
  void Step() override;

 private:
  Real lr_;
};

struct AdamConfig {
  Real lr = 1e-3;
  Real beta1 = 0.9;
  Real beta2 = 0.999;
  Real eps = 1e-8;
};

class Adam : public Optimizer {
 public:
  Adam(std::vector<Var> params, AdamConfig config);
  void Step() override;
  long steps() const { return t_; }

 private:
  AdamConfig config_;
  long t_ = 0;
  std::vector<Tensor> m_, v_;
};

// Checkpoint directory: manifest.json plus one <index>.bin payload per tensor.
void WriteCheckpoint(const ParamStore& store, const std::filesystem::path& dir);
ParamStore ReadCheckpoint(const std::filesystem::path& dir);

}  // namespace neurosyn

#endif  // NEUROSYN_PARAMS_H_

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

// Neural module templates instantiated from type signatures.

#ifndef NEUROSYN_MODULES_H_
#define NEUROSYN_MODULES_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "neurosyn/params.h"
#include "neurosyn/types.h"
#include "neurosyn/value.h"

namespace neurosyn {

enum class ModuleKind : unsigned char { kMlp, kCnn, kRnn, kFixed };
enum class Activation : unsigned char { kLinear, kSigmoid, kSoftmax };

const char* ToString(ModuleKind kind);
const char* ToString(Activation activation);
ModuleKind ParseModuleKind(const std::string& s);
Activation ParseActivation(const std::string& s);

struct KindChoice {
  ModuleKind kind;
  Activation activation;
};

// rank >= 2 tensor input: CNN; list input: RNN; otherwise MLP. Curried
// A -> (B -> C) signatures (fold bodies) take the MLP template over both
// arguments. Bool outputs use sigmoid; `classification` marks a real vector
// output as a class distribution (softmax). Throws std::invalid_argument
// for graph inputs and other signatures no single module can realize.
KindChoice SelectKind(const Type& signature, bool classification = false);
bool IsModuleSignature(const Type& signature);

// Small defaults; large configurations use 1024 / (32, 64) / 100.
struct ModuleHyper {
  int mlp_hidden = 32;
  std::vector<int> cnn_channels = {4, 8};
  int cnn_kernel = 3;
  int lstm_hidden = 16;
  // Batch-norm after each convolution and dropout after the MLP hidden
  // layer; off by default, meant for large configurations.
  bool regularizers = false;
  Real dropout = 0.5;
};

struct CallContext {
  bool train = false;
  std::uint64_t seed = 0;
};

class NeuralModule {
 public:
  virtual ~NeuralModule() = default;

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  const Type& signature() const { return signature_; }
  ModuleKind kind() const { return kind_; }
  Activation activation() const { return activation_; }
  const ModuleHyper& hyper() const { return hyper_; }

  const ParamStore& params() const { return params_; }
  ParamStore& mutable_params() { return params_; }
  bool frozen() const { return params_.frozen(); }
  void Freeze() { params_.Freeze(); }

  // One argument for A -> B; two for curried A -> (B -> C). Tensor
  // arguments are [N, dims...]; the result is [N, output dims...].
  virtual Var Call(const std::vector<Value>& args, const CallContext& ctx) const = 0;

 protected:
  NeuralModule(std::string name, Type signature, ModuleKind kind,
               Activation activation, ModuleHyper hyper)
      : name_(std::move(name)),
        signature_(std::move(signature)),
        kind_(kind),
        activation_(activation),
        hyper_(std::move(hyper)) {}

  // Applies the output activation and reshapes [N, k] to the output type.
  Var Finish(const Var& logits) const;
  const TensorType& output_tensor() const;

  std::string name_;
  Type signature_;
  ModuleKind kind_;
  Activation activation_;
  ModuleHyper hyper_;
  ParamStore params_;
};

using ModulePtr = std::shared_ptr<NeuralModule>;

// Fresh, unfrozen template with seeded fan-in uniform initialization.
ModulePtr Instantiate(ModuleKind kind, const Type& signature,
                      Activation activation, const ModuleHyper& hyper,
                      std::uint64_t seed, std::string name = "");
ModulePtr InstantiateFor(const Type& signature, bool classification,
                         const ModuleHyper& hyper, std::uint64_t seed,
                         std::string name = "");

// Exact min-plus relaxation over list<real[2]> windows whose first element
// is the node itself: (w, d) -> (w_self, min(d_self, min_j d_j + w_j)).
ModulePtr MakeMinPlusRelaxation(std::string name);

// Rebuilds a module from its description and a checkpoint; the result is
// frozen when the checkpoint is.
ModulePtr Rebuild(const std::string& name, const Type& signature,
                  ModuleKind kind, Activation activation,
                  const ModuleHyper& hyper, const ParamStore& checkpoint);

}  // namespace neurosyn

#endif  // NEUROSYN_MODULES_H_

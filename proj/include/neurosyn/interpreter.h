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

// Differentiable evaluation of complete programs on batched values.

#ifndef NEUROSYN_INTERPRETER_H_
#define NEUROSYN_INTERPRETER_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "neurosyn/library.h"
#include "neurosyn/term.h"
#include "neurosyn/value.h"

namespace neurosyn {

// Fresh modules of one candidate over a shared frozen library.
class ModuleSet {
 public:
  ModuleSet() = default;
  explicit ModuleSet(const Library* library) : library_(library) {}

  void AddFresh(ModulePtr module);
  const NeuralModule* Find(std::string_view name) const;
  // Fresh modules resolve as fresh, library modules as frozen.
  NameResolver Resolver() const;
  const std::map<std::string, ModulePtr, std::less<>>& fresh() const { return fresh_; }
  // Parameters of unfrozen fresh modules, in name order.
  std::vector<Var> TrainableParams() const;

 private:
  const Library* library_ = nullptr;
  std::map<std::string, ModulePtr, std::less<>> fresh_;
};

struct EvalOptions {
  bool train = false;
  std::uint64_t seed = 0;
  // List convolution window is 2 * radius + 1.
  int conv_radius = 1;
  // Graph convolution presents 1 + max_degree values per node.
  int max_degree = 4;
};

// Combinator kernels over batched values. Element functions see all
// elements of all samples as one [total, ...] batch.
using ElementFn = std::function<Var(const Var&)>;
using PairFn = std::function<Var(const Var&, const Var&)>;
using WindowFn = std::function<Var(const Value&)>;

Value MapApply(const ElementFn& body, const Value& adt);
// Left fold per sample: body(...body(body(init, a1), a2)..., ak). `init`
// is [B, dims...]; samples with no elements return their init row.
Var FoldApply(const PairFn& body, const Var& init, const Value& adt);
// Window of element i: a[i-p .. i+p], indices clamped to the sample.
Value ConvListApply(const WindowFn& kernel, int radius, const Value& list);
// Window of node u: u, then neighbors ascending, padded with u.
Value ConvGraphApply(const WindowFn& kernel, const Value& graph, int repeat,
                     int max_degree);

class Interpreter {
 public:
  Interpreter(const ModuleSet& modules, EvalOptions options)
      : modules_(modules), options_(options) {}

  // Function-typed term applied to a value.
  Value Apply(const Term& t, const Value& x);
  // Curried term t : A -> (B -> C) applied to a and b.
  Var Apply2(const Term& t, const Value& a, const Value& b);
  // Data-typed term (zeros) replicated over `batch` rows.
  Var Constant(const Term& t, int batch);

 private:
  const NeuralModule& Module(const Term& t);
  CallContext NextContext();

  const ModuleSet& modules_;
  EvalOptions options_;
  std::uint64_t calls_ = 0;
};

// Type-checks the program against the modules, checks that `input`
// conforms to its input type, and evaluates it.
Value Evaluate(const Term& program, const Value& input,
               const ModuleSet& modules, const EvalOptions& options = {});

}  // namespace neurosyn

#endif  // NEUROSYN_INTERPRETER_H_

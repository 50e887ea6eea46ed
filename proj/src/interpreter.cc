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

#include "neurosyn/interpreter.h"

#include <algorithm>

#include "neurosyn/typing.h"

namespace neurosyn {

void ModuleSet::AddFresh(ModulePtr module) {
  std::string name = module->name();
  if (name.empty()) throw std::invalid_argument("fresh module without a name");
  if (!fresh_.emplace(name, std::move(module)).second) {
    throw std::invalid_argument("duplicate fresh module '" + name + "'");
  }
}

const NeuralModule* ModuleSet::Find(std::string_view name) const {
  if (auto it = fresh_.find(name); it != fresh_.end()) return it->second.get();
  if (library_) {
    if (ModulePtr m = library_->Find(name)) return m.get();
  }
  return nullptr;
}

NameResolver ModuleSet::Resolver() const {
  return [this](std::string_view name) -> std::optional<NameInfo> {
    if (auto it = fresh_.find(name); it != fresh_.end()) {
      return NameInfo{it->second->signature(), true};
    }
    if (library_) {
      if (ModulePtr m = library_->Find(name)) return NameInfo{m->signature(), false};
    }
    return std::nullopt;
  };
}

std::vector<Var> ModuleSet::TrainableParams() const {
  std::vector<Var> out;
  for (const auto& [name, m] : fresh_) {
    for (const Var& v : m->params().Trainable()) out.push_back(v);
  }
  return out;
}

Value MapApply(const ElementFn& body, const Value& adt) {
  if (adt.is_tensor()) throw ShapeError("map over a tensor value");
  Var out = body(adt.data);
  if (out.shape().empty() || out.shape()[0] != adt.data.shape()[0]) {
    throw ShapeError("map body changed the number of elements");
  }
  return adt.WithData(std::move(out));
}

Var FoldApply(const PairFn& body, const Var& init, const Value& adt) {
  if (adt.is_tensor()) throw ShapeError("fold over a tensor value");
  const int batch = adt.batch();
  if (init.shape().empty() || init.shape()[0] != batch) {
    throw ShapeError("fold seed has " + ShapeToString(init.shape()) + " for " +
                     std::to_string(batch) + " samples");
  }
  int max_len = 0;
  for (int b = 0; b < batch; ++b) max_len = std::max(max_len, adt.length(b));
  Var acc = init;
  std::vector<int> index(batch);
  std::vector<std::uint8_t> mask(batch);
  for (int t = 0; t < max_len; ++t) {
    bool all = true;
    for (int b = 0; b < batch; ++b) {
      int len = adt.length(b);
      mask[b] = t < len;
      all = all && mask[b];
      index[b] = len == 0 ? 0 : adt.offsets[b] + std::min(t, len - 1);
    }
    Var next = body(acc, GatherRows(adt.data, index));
    if (next.shape() != acc.shape()) ThrowShapeMismatch("fold step", acc.shape(), next.shape());
    acc = all ? next : SelectRows(mask, next, acc);
  }
  return acc;
}

namespace {

// Rows of `windows` are grouped per element, `width` rows each.
Value WindowList(const Value& source, const std::vector<int>& index, int width) {
  int total = source.data.shape()[0];
  std::vector<int> offsets(total + 1);
  for (int i = 0; i <= total; ++i) offsets[i] = i * width;
  return Value::OfList(GatherRows(source.data, index), std::move(offsets));
}

Value ApplyWindows(const WindowFn& kernel, const Value& source,
                   const std::vector<int>& index, int width) {
  int total = source.data.shape()[0];
  if (total == 0) {
    // No elements: the kernel never runs, but the output shape must still
    // follow from it, so evaluate it on one dummy window.
    Shape s = source.data.shape();
    s[0] = width;
    Value dummy = Value::OfList(Constant(Tensor(s)), {0, width});
    Var probe = kernel(dummy);
    Shape out = probe.shape();
    out[0] = 0;
    return source.WithData(Constant(Tensor(out)));
  }
  Var out = kernel(WindowList(source, index, width));
  if (out.shape().empty() || out.shape()[0] != total) {
    throw ShapeError("conv kernel must return one row per window");
  }
  return source.WithData(std::move(out));
}

}  // namespace

Value ConvListApply(const WindowFn& kernel, int radius, const Value& list) {
  if (list.kind != Value::Kind::kList) throw ShapeError("conv_l over a non-list value");
  if (radius < 0) throw std::invalid_argument("negative conv radius");
  const int width = 2 * radius + 1;
  std::vector<int> index;
  index.reserve(static_cast<std::size_t>(list.data.shape()[0]) * width);
  for (int b = 0; b < list.batch(); ++b) {
    int lo = list.offsets[b], hi = list.offsets[b + 1] - 1;
    for (int i = lo; i <= hi; ++i) {
      for (int j = -radius; j <= radius; ++j) {
        index.push_back(std::clamp(i + j, lo, hi));
      }
    }
  }
  return ApplyWindows(kernel, list, index, width);
}

Value ConvGraphApply(const WindowFn& kernel, const Value& graph, int repeat,
                     int max_degree) {
  if (graph.kind != Value::Kind::kGraph) throw ShapeError("conv_g over a non-graph value");
  if (repeat < 1) throw std::invalid_argument("conv repeat must be >= 1");
  const GraphTopology& g = *graph.topology;
  const int total = graph.data.shape()[0];
  const int width = 1 + max_degree;
  std::vector<int> index;
  index.reserve(static_cast<std::size_t>(total) * width);
  for (int u = 0; u < total; ++u) {
    int deg = g.degree(u);
    if (deg > max_degree) {
      throw std::invalid_argument("node degree " + std::to_string(deg) +
                                  " exceeds the configured maximum " +
                                  std::to_string(max_degree));
    }
    index.push_back(u);
    for (int k = g.row_start[u]; k < g.row_start[u + 1]; ++k) {
      index.push_back(g.neighbors[k]);
    }
    for (int k = deg; k < max_degree; ++k) index.push_back(u);
  }
  Value v = graph;
  for (int r = 0; r < repeat; ++r) v = ApplyWindows(kernel, v, index, width);
  return v;
}

const NeuralModule& Interpreter::Module(const Term& t) {
  const NeuralModule* m = modules_.Find(t.name());
  if (!m) throw std::invalid_argument("unknown module '" + t.name() + "'");
  if (!(m->signature() == t.type_annotation())) {
    throw std::invalid_argument("module '" + t.name() + "' has signature " +
                                m->signature().ToString() + ", program expects " +
                                t.type_annotation().ToString());
  }
  return *m;
}

CallContext Interpreter::NextContext() {
  CallContext ctx;
  ctx.train = options_.train;
  ctx.seed = options_.seed * 0x9E3779B97F4A7C15ULL + ++calls_;
  return ctx;
}

Value Interpreter::Apply(const Term& t, const Value& x) {
  switch (t.kind()) {
    case Term::Kind::kLibRef: {
      const NeuralModule& m = Module(t);
      return Value::OfTensor(m.Call({x}, NextContext()));
    }
    case Term::Kind::kCompose:
      return Apply(*t.child(0), Apply(*t.child(1), x));
    case Term::Kind::kMap: {
      const Term& body = *t.child(0);
      return MapApply([&](const Var& e) { return Apply(body, Value::OfTensor(e)).data; }, x);
    }
    case Term::Kind::kFold: {
      const Term& body = *t.child(0);
      Var init = Constant(*t.child(1), x.batch());
      return Value::OfTensor(FoldApply(
          [&](const Var& acc, const Var& e) {
            return Apply2(body, Value::OfTensor(acc), Value::OfTensor(e));
          },
          init, x));
    }
    case Term::Kind::kConv: {
      const Term& kernel = *t.child(0);
      WindowFn k = [&](const Value& w) { return Apply(kernel, w).data; };
      if (t.adt() == AdtKind::kList) {
        Value v = x;
        for (int r = 0; r < t.repeat(); ++r) v = ConvListApply(k, options_.conv_radius, v);
        return v;
      }
      return ConvGraphApply(k, x, t.repeat(), options_.max_degree);
    }
    case Term::Kind::kZeros:
      throw std::invalid_argument("zeros is a constant, not a function");
    case Term::Kind::kHole:
      throw std::invalid_argument("cannot evaluate a partial program");
  }
  throw std::logic_error("unknown term kind");
}

Var Interpreter::Apply2(const Term& t, const Value& a, const Value& b) {
  switch (t.kind()) {
    case Term::Kind::kLibRef:
      return Module(t).Call({a, b}, NextContext());
    case Term::Kind::kCompose:
      return Apply2(*t.child(0), Apply(*t.child(1), a), b);
    default:
      throw std::invalid_argument("term is not a curried function: " +
                                  std::string(t.kind() == Term::Kind::kHole ? "hole" : "combinator"));
  }
}

Var Interpreter::Constant(const Term& t, int batch) {
  if (t.kind() != Term::Kind::kZeros) {
    throw std::invalid_argument("only zeros(d) denotes a constant");
  }
  return neurosyn::Constant(Tensor(Shape{batch, t.zeros_dim()}));
}

Value Evaluate(const Term& program, const Value& input,
               const ModuleSet& modules, const EvalOptions& options) {
  Type t = InferType(program, modules.Resolver());
  if (!program.IsComplete()) throw std::invalid_argument("cannot evaluate a partial program");
  if (!t.is_function()) throw std::invalid_argument("program is not a function");
  CheckConforms(input, t.input());
  Interpreter interp(modules, options);
  return interp.Apply(program, input);
}

}  // namespace neurosyn

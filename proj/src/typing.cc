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

#include "neurosyn/typing.h"

#include <algorithm>
#include <set>

namespace neurosyn {

TypeError::TypeError(const std::string& message, TermPath path)
    : std::runtime_error(message + " at " + PathToString(path)),
      path_(std::move(path)) {}

std::string PathToString(const TermPath& path) {
  std::string s = "root";
  for (int i : path) s += "." + std::to_string(i);
  return s;
}

namespace {

class Checker {
 public:
  explicit Checker(const NameResolver* resolve) : resolve_(resolve) {}

  Type Infer(const Term& t, TermPath& path, std::vector<SubtermSlot>* slots) {
    std::size_t slot_index = 0;
    if (slots) {
      slot_index = slots->size();
      slots->push_back({path, Type()});
    }
    Type result = InferNode(t, path, slots);
    if (slots) (*slots)[slot_index].type = result;
    return result;
  }

 private:
  Type Child(const Term& t, int i, TermPath& path,
             std::vector<SubtermSlot>* slots) {
    path.push_back(i);
    Type r = Infer(*t.child(i), path, slots);
    path.pop_back();
    return r;
  }

  [[noreturn]] static void Fail(const std::string& msg, const TermPath& path) {
    throw TypeError("type-inconsistent: " + msg, path);
  }

  static void RequireFunction(const Type& t, const char* role,
                              const TermPath& path, int child) {
    if (!t.is_function()) {
      TermPath p = path;
      p.push_back(child);
      Fail(std::string(role) + " must be a function, got " + t.ToString(), p);
    }
  }

  Type InferNode(const Term& t, TermPath& path,
                 std::vector<SubtermSlot>* slots) {
    switch (t.kind()) {
      case Term::Kind::kLibRef: {
        if (resolve_ && *resolve_) {
          auto info = (*resolve_)(t.name());
          if (!info) {
            throw std::invalid_argument("unknown library name '" + t.name() +
                                        "'");
          }
          if (!(info->signature == t.type_annotation())) {
            Fail("reference '" + t.name() + "' recorded as " +
                     t.type_annotation().ToString() + " but library has " +
                     info->signature.ToString(),
                 path);
          }
        }
        return t.type_annotation();
      }
      case Term::Kind::kHole:
        return t.type_annotation();
      case Term::Kind::kZeros:
        return Type::Tensor(Atom::kReal, {t.zeros_dim()});
      case Term::Kind::kCompose: {
        Type outer = Child(t, 0, path, slots);
        Type inner = Child(t, 1, path, slots);
        RequireFunction(outer, "compose outer", path, 0);
        RequireFunction(inner, "compose inner", path, 1);
        if (!(outer.input() == inner.output())) {
          Fail("compose inner yields " + inner.output().ToString() +
                   " but outer expects " + outer.input().ToString(),
               path);
        }
        return Type::Function(inner.input(), outer.output());
      }
      case Term::Kind::kMap: {
        Type body = Child(t, 0, path, slots);
        RequireFunction(body, "map body", path, 0);
        if (!body.input().is_tensor() || !body.output().is_tensor()) {
          Fail("map body must be tensor -> tensor, got " + body.ToString(),
               path);
        }
        return Type::Function(Type::Adt(t.adt(), body.input().tensor()),
                              Type::Adt(t.adt(), body.output().tensor()));
      }
      case Term::Kind::kFold: {
        Type body = Child(t, 0, path, slots);
        Type init = Child(t, 1, path, slots);
        RequireFunction(body, "fold body", path, 0);
        const Type& acc = body.input();
        if (!acc.is_tensor() || !body.output().is_function() ||
            !body.output().input().is_tensor() ||
            !(body.output().output() == acc)) {
          Fail("fold body must be t' -> (t -> t'), got " + body.ToString(),
               path);
        }
        if (!(init == acc)) {
          Fail("fold seed has type " + init.ToString() + ", expected " +
                   acc.ToString(),
               path);
        }
        return Type::Function(
            Type::Adt(t.adt(), body.output().input().tensor()), acc);
      }
      case Term::Kind::kConv: {
        Type kernel = Child(t, 0, path, slots);
        RequireFunction(kernel, "conv kernel", path, 0);
        if (kernel.input().kind() != Type::Kind::kList ||
            !kernel.output().is_tensor()) {
          Fail("conv kernel must be list<t> -> t', got " + kernel.ToString(),
               path);
        }
        const TensorType& in = kernel.input().tensor();
        const TensorType& out = kernel.output().tensor();
        if (t.repeat() > 1 && !(in == out)) {
          Fail("repeated conv needs list<t> -> t, got " + kernel.ToString(),
               path);
        }
        return Type::Function(Type::Adt(t.adt(), in), Type::Adt(t.adt(), out));
      }
    }
    Fail("unknown term kind", path);
  }

  const NameResolver* resolve_;
};

}  // namespace

Type InferType(const Term& term) {
  TermPath path;
  return Checker(nullptr).Infer(term, path, nullptr);
}

Type InferType(const Term& term, const NameResolver& resolve) {
  TermPath path;
  return Checker(&resolve).Infer(term, path, nullptr);
}

bool CheckType(const Term& term, const Type& expected,
               const NameResolver& resolve) {
  try {
    TermPath path;
    return Checker(&resolve).Infer(term, path, nullptr) == expected;
  } catch (const TypeError&) {
    return false;
  }
}

std::vector<SubtermSlot> EnumerateSubtermSlots(const TermPtr& term) {
  std::vector<SubtermSlot> slots;
  TermPath path;
  Checker(nullptr).Infer(*term, path, &slots);
  return slots;
}

std::vector<TensorType> CrossShapes(
    const std::vector<Atom>& atoms,
    const std::vector<std::vector<int>>& shapes) {
  std::vector<TensorType> out;
  for (Atom a : atoms) {
    for (const auto& s : shapes) out.push_back(TensorType{a, s});
  }
  return out;
}

TypeUniverse::TypeUniverse(UniverseConfig config) : config_(std::move(config)) {
  if (config_.tensors.empty()) {
    throw std::invalid_argument("type universe: empty tensor allow-list");
  }
  if (config_.max_function_depth < 1) {
    throw std::invalid_argument("type universe: function depth must be >= 1");
  }
  std::set<TensorType> unique;
  for (const auto& t : config_.tensors) {
    if (t.rank() > config_.max_rank) {
      throw std::invalid_argument("type universe: " + ToString(t) +
                                  " exceeds the rank bound");
    }
    for (int d : t.dims) {
      if (d < 1 || d > config_.max_dim) {
        throw std::invalid_argument("type universe: " + ToString(t) +
                                    " exceeds the dimension bound");
      }
    }
    unique.insert(t);
  }
  tensors_.assign(unique.begin(), unique.end());
  std::vector<AdtKind> adts = config_.adts;
  std::sort(adts.begin(), adts.end());
  adts.erase(std::unique(adts.begin(), adts.end()), adts.end());
  config_.adts = adts;
  for (const auto& t : tensors_) data_types_.push_back(Type::Tensor(t));
  for (AdtKind adt : adts) {
    for (const auto& t : tensors_) data_types_.push_back(Type::Adt(adt, t));
  }
}

bool TypeUniverse::ContainsTensor(const TensorType& t) const {
  return std::binary_search(tensors_.begin(), tensors_.end(), t);
}

bool TypeUniverse::Contains(const Type& t) const {
  switch (t.kind()) {
    case Type::Kind::kTensor:
      return ContainsTensor(t.tensor());
    case Type::Kind::kList:
    case Type::Kind::kGraph:
      return std::find(config_.adts.begin(), config_.adts.end(), t.adt()) !=
                 config_.adts.end() &&
             ContainsTensor(t.tensor());
    case Type::Kind::kFunction:
      return t.depth() <= config_.max_function_depth &&
             Contains(t.input()) && Contains(t.output());
  }
  return false;
}

std::vector<Type> TypeUniverse::Enumerate() const {
  std::vector<Type> all = data_types_;
  std::size_t previous_layer_end = 0;
  for (int depth = 1; depth <= config_.max_function_depth; ++depth) {
    std::size_t below = all.size();  // types of depth < `depth`
    for (std::size_t i = 0; i < below; ++i) {
      for (std::size_t j = 0; j < below; ++j) {
        // At least one side must have depth exactly depth - 1.
        if (i < previous_layer_end && j < previous_layer_end) continue;
        all.push_back(Type::Function(all[i], all[j]));
      }
    }
    previous_layer_end = below;
  }
  return all;
}

long TypeUniverse::Size() const {
  long below = static_cast<long>(data_types_.size());
  long previous = 0;
  long total = below;
  for (int depth = 1; depth <= config_.max_function_depth; ++depth) {
    long layer = below * below - previous * previous;
    previous = below;
    below += layer;
    total += layer;
  }
  return total;
}

TypeUniverse EnumerateUniverse(const UniverseConfig& config) {
  return TypeUniverse(config);
}

}  // namespace neurosyn

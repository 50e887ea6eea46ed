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

#ifndef NEUROSYN_TYPING_H_
#define NEUROSYN_TYPING_H_

#include <stdexcept>
#include <string>
#include <vector>

#include "neurosyn/syntax.h"
#include "neurosyn/term.h"
#include "neurosyn/types.h"

namespace neurosyn {

// Raised for type-inconsistent terms; `path` locates the offending subterm.
class TypeError : public std::runtime_error {
 public:
  TypeError(const std::string& message, TermPath path);
  const TermPath& path() const { return path_; }

 private:
  TermPath path_;
};

std::string PathToString(const TermPath& path);

// Typing rules:
//   compose(f: t'->t'', g: t->t')      : t -> t''
//   map_a(f: t->t')                    : a<t> -> a<t'>
//   fold_a(f: t'->(t->t'), z: t')      : a<t> -> t'
//   conv_a^n(k: list<t>->t')           : a<t> -> a<t'>   (n > 1 needs t = t')
//   zeros(d)                           : real[d]
//   hole<t>                            : t
// Library references carry their signature.
Type InferType(const Term& term);

// As above, and additionally requires every referenced name to resolve to
// the signature recorded in the term.
Type InferType(const Term& term, const NameResolver& resolve);

// True iff the term is well-typed with exactly `expected`. Unresolvable
// names still raise.
bool CheckType(const Term& term, const Type& expected,
               const NameResolver& resolve = nullptr);

struct SubtermSlot {
  TermPath path;
  Type type;
};

// Every node of a well-typed term with its assigned type, in preorder.
std::vector<SubtermSlot> EnumerateSubtermSlots(const TermPtr& term);

struct UniverseConfig {
  // Allowed tensor types; ADTs range over exactly these element types.
  std::vector<TensorType> tensors;
  std::vector<AdtKind> adts = {AdtKind::kList, AdtKind::kGraph};
  int max_function_depth = 2;
  int max_rank = 3;
  int max_dim = 64;
};

// Cross product helper: every atom over every shape.
std::vector<TensorType> CrossShapes(const std::vector<Atom>& atoms,
                                    const std::vector<std::vector<int>>& shapes);

// The finite set of types available to synthesis.
class TypeUniverse {
 public:
  explicit TypeUniverse(UniverseConfig config);

  const UniverseConfig& config() const { return config_; }
  // Allowed tensor types, sorted.
  const std::vector<TensorType>& tensors() const { return tensors_; }
  // Tensors followed by ADT types; the candidates for composition
  // intermediates.
  const std::vector<Type>& data_types() const { return data_types_; }

  bool Contains(const Type& t) const;
  bool ContainsTensor(const TensorType& t) const;

  // Deterministic enumeration: data types, then function types by depth.
  std::vector<Type> Enumerate() const;
  long Size() const;

 private:
  UniverseConfig config_;
  std::vector<TensorType> tensors_;
  std::vector<Type> data_types_;
};

// Validates the config (non-empty allow-list, rank/dim bounds).
TypeUniverse EnumerateUniverse(const UniverseConfig& config);

}  // namespace neurosyn

#endif  // NEUROSYN_TYPING_H_

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

// Program AST of the point-free language. Terms are immutable and shared;
// every rewrite builds a new spine and reuses untouched subtrees.

#ifndef NEUROSYN_TERM_H_
#define NEUROSYN_TERM_H_

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "neurosyn/types.h"

namespace neurosyn {

class Term;
using TermPtr = std::shared_ptr<const Term>;

// Root-to-node child indices. Compose: 0 = outer, 1 = inner.
// Map/Conv: 0 = body. Fold: 0 = body, 1 = init.
using TermPath = std::vector<int>;

class Term {
 public:
  enum class Kind : unsigned char {
    kLibRef,
    kCompose,
    kMap,
    kFold,
    kConv,
    kZeros,
    kHole,
  };

  // A reference to a neural (or fixed) library function. `fresh` marks a
  // module instantiated for the enclosing candidate rather than drawn from
  // the library; fresh names are assigned when a candidate is finalized.
  static TermPtr LibRef(std::string name, Type signature, bool fresh = false);
  // compose(outer, inner)(x) = outer(inner(x)).
  static TermPtr Compose(TermPtr outer, TermPtr inner);
  static TermPtr Map(AdtKind adt, TermPtr body);
  static TermPtr Fold(AdtKind adt, TermPtr body, TermPtr init);
  static TermPtr Conv(AdtKind adt, TermPtr kernel, int repeat = 1);
  static TermPtr Zeros(int dim);
  static TermPtr Hole(Type expected, int id);

  Kind kind() const { return kind_; }
  bool is_hole() const { return kind_ == Kind::kHole; }

  const std::string& name() const { return name_; }
  bool fresh() const { return fresh_; }
  // LibRef signature or hole type.
  const Type& type_annotation() const { return type_; }
  AdtKind adt() const { return adt_; }
  int repeat() const { return number_; }
  int zeros_dim() const { return number_; }
  int hole_id() const { return number_; }
  const std::vector<TermPtr>& children() const { return children_; }
  const TermPtr& child(int i) const { return children_.at(i); }

  bool IsComplete() const { return holes_ == 0; }
  int NumHoles() const { return holes_; }
  int NumNodes() const { return nodes_; }

 private:
  Term() = default;

  Kind kind_ = Kind::kHole;
  std::string name_;
  bool fresh_ = false;
  Type type_;
  AdtKind adt_ = AdtKind::kList;
  int number_ = 0;
  int holes_ = 0;
  int nodes_ = 1;
  std::vector<TermPtr> children_;

  friend TermPtr WithChildren(const Term& t, std::vector<TermPtr> children);
  friend TermPtr Renamed(const Term& t, std::string name, bool fresh);
};

// Copy of `t` with new children (same arity).
TermPtr WithChildren(const Term& t, std::vector<TermPtr> children);
// Copy of a LibRef with a new name / freshness.
TermPtr Renamed(const Term& t, std::string name, bool fresh);

bool StructurallyEqual(const Term& a, const Term& b);

// Occurrences of library functions and combinators. Zeros counts 1, holes
// count 0, and a repeated convolution counts 1 regardless of its exponent.
int ProgramSize(const Term& t);

// Node at `path`; throws std::out_of_range on an invalid path.
const TermPtr& Subterm(const TermPtr& root, const TermPath& path);
TermPtr ReplaceAt(const TermPtr& root, const TermPath& path, TermPtr replacement);

// Preorder paths of every node.
std::vector<TermPath> AllPaths(const TermPtr& root);
// Preorder (leftmost first) hole paths.
std::vector<TermPath> HolePaths(const TermPtr& root);

// Names of every LibRef in preorder, duplicates included.
std::vector<std::string> ReferencedNames(const Term& t);

// Gives fresh LibRefs the names produced by `next_name`, in preorder.
TermPtr NameFreshModules(const TermPtr& root,
                         const std::function<std::string()>& next_name);
// Clears fresh names so structurally identical candidates compare equal.
TermPtr EraseFreshNames(const TermPtr& root);

// Largest hole id in the term, or -1.
int MaxHoleId(const Term& t);

}  // namespace neurosyn

#endif  // NEUROSYN_TERM_H_

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

#include "neurosyn/term.h"

#include <functional>
#include <stdexcept>

namespace neurosyn {

namespace {

// Recomputes the cached hole / node counts from the children.
void Summarize(int& holes, int& nodes, const std::vector<TermPtr>& children,
               bool is_hole) {
  holes = is_hole ? 1 : 0;
  nodes = 1;
  for (const auto& c : children) {
    if (c == nullptr) throw std::invalid_argument("null child term");
    holes += c->NumHoles();
    nodes += c->NumNodes();
  }
}

}  // namespace

#define NEUROSYN_MAKE_TERM(var) \
  auto var = std::shared_ptr<Term>(new Term())

TermPtr Term::LibRef(std::string name, Type signature, bool fresh) {
  if (!signature.is_function()) {
    throw std::invalid_argument("library reference '" + name +
                                "' needs a function signature");
  }
  NEUROSYN_MAKE_TERM(t);
  t->kind_ = Kind::kLibRef;
  t->name_ = std::move(name);
  t->type_ = std::move(signature);
  t->fresh_ = fresh;
  return t;
}

TermPtr Term::Compose(TermPtr outer, TermPtr inner) {
  NEUROSYN_MAKE_TERM(t);
  t->kind_ = Kind::kCompose;
  t->children_ = {std::move(outer), std::move(inner)};
  Summarize(t->holes_, t->nodes_, t->children_, false);
  return t;
}

TermPtr Term::Map(AdtKind adt, TermPtr body) {
  NEUROSYN_MAKE_TERM(t);
  t->kind_ = Kind::kMap;
  t->adt_ = adt;
  t->children_ = {std::move(body)};
  Summarize(t->holes_, t->nodes_, t->children_, false);
  return t;
}

TermPtr Term::Fold(AdtKind adt, TermPtr body, TermPtr init) {
  NEUROSYN_MAKE_TERM(t);
  t->kind_ = Kind::kFold;
  t->adt_ = adt;
  t->children_ = {std::move(body), std::move(init)};
  Summarize(t->holes_, t->nodes_, t->children_, false);
  return t;
}

TermPtr Term::Conv(AdtKind adt, TermPtr kernel, int repeat) {
  if (repeat < 1) throw std::invalid_argument("conv repeat must be >= 1");
  NEUROSYN_MAKE_TERM(t);
  t->kind_ = Kind::kConv;
  t->adt_ = adt;
  t->number_ = repeat;
  t->children_ = {std::move(kernel)};
  Summarize(t->holes_, t->nodes_, t->children_, false);
  return t;
}

TermPtr Term::Zeros(int dim) {
  if (dim < 1) throw std::invalid_argument("zeros dimension must be >= 1");
  NEUROSYN_MAKE_TERM(t);
  t->kind_ = Kind::kZeros;
  t->number_ = dim;
  return t;
}

TermPtr Term::Hole(Type expected, int id) {
  NEUROSYN_MAKE_TERM(t);
  t->kind_ = Kind::kHole;
  t->type_ = std::move(expected);
  t->number_ = id;
  t->holes_ = 1;
  return t;
}

#undef NEUROSYN_MAKE_TERM

TermPtr WithChildren(const Term& t, std::vector<TermPtr> children) {
  if (children.size() != t.children_.size()) {
    throw std::invalid_argument("WithChildren: arity mismatch");
  }
  auto out = std::shared_ptr<Term>(new Term(t));
  out->children_ = std::move(children);
  Summarize(out->holes_, out->nodes_, out->children_, t.is_hole());
  return out;
}

TermPtr Renamed(const Term& t, std::string name, bool fresh) {
  if (t.kind() != Term::Kind::kLibRef) {
    throw std::invalid_argument("Renamed: not a library reference");
  }
  auto out = std::shared_ptr<Term>(new Term(t));
  out->name_ = std::move(name);
  out->fresh_ = fresh;
  return out;
}

bool StructurallyEqual(const Term& a, const Term& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::kLibRef:
      if (a.name() != b.name() || a.fresh() != b.fresh() ||
          !(a.type_annotation() == b.type_annotation())) {
        return false;
      }
      break;
    case Term::Kind::kHole:
      if (a.hole_id() != b.hole_id() ||
          !(a.type_annotation() == b.type_annotation())) {
        return false;
      }
      break;
    case Term::Kind::kZeros:
    case Term::Kind::kConv:
      if (a.repeat() != b.repeat()) return false;
      break;
    default:
      break;
  }
  if (a.kind() == Term::Kind::kMap || a.kind() == Term::Kind::kFold ||
      a.kind() == Term::Kind::kConv) {
    if (a.adt() != b.adt()) return false;
  }
  for (std::size_t i = 0; i < a.children().size(); ++i) {
    if (!StructurallyEqual(*a.children()[i], *b.children()[i])) return false;
  }
  return true;
}

int ProgramSize(const Term& t) {
  if (t.is_hole()) return 0;
  int size = 1;
  for (const auto& c : t.children()) size += ProgramSize(*c);
  return size;
}

const TermPtr& Subterm(const TermPtr& root, const TermPath& path) {
  const TermPtr* node = &root;
  for (int i : path) {
    const auto& children = (*node)->children();
    if (i < 0 || i >= static_cast<int>(children.size())) {
      throw std::out_of_range("invalid term path");
    }
    node = &children[i];
  }
  return *node;
}

namespace {

TermPtr ReplaceFrom(const TermPtr& node, const TermPath& path, std::size_t depth,
                    TermPtr replacement) {
  if (depth == path.size()) return replacement;
  int i = path[depth];
  const auto& children = node->children();
  if (i < 0 || i >= static_cast<int>(children.size())) {
    throw std::out_of_range("invalid term path");
  }
  std::vector<TermPtr> next = children;
  next[i] = ReplaceFrom(children[i], path, depth + 1, std::move(replacement));
  return WithChildren(*node, std::move(next));
}

void CollectPaths(const TermPtr& node, TermPath& prefix,
                  std::vector<TermPath>& out, bool holes_only) {
  if (holes_only && node->NumHoles() == 0) return;
  if (!holes_only || node->is_hole()) out.push_back(prefix);
  for (int i = 0; i < static_cast<int>(node->children().size()); ++i) {
    prefix.push_back(i);
    CollectPaths(node->children()[i], prefix, out, holes_only);
    prefix.pop_back();
  }
}

}  // namespace

TermPtr ReplaceAt(const TermPtr& root, const TermPath& path,
                  TermPtr replacement) {
  return ReplaceFrom(root, path, 0, std::move(replacement));
}

std::vector<TermPath> AllPaths(const TermPtr& root) {
  std::vector<TermPath> out;
  TermPath prefix;
  CollectPaths(root, prefix, out, false);
  return out;
}

std::vector<TermPath> HolePaths(const TermPtr& root) {
  std::vector<TermPath> out;
  TermPath prefix;
  CollectPaths(root, prefix, out, true);
  return out;
}

std::vector<std::string> ReferencedNames(const Term& t) {
  std::vector<std::string> out;
  std::function<void(const Term&)> walk = [&](const Term& n) {
    if (n.kind() == Term::Kind::kLibRef) out.push_back(n.name());
    for (const auto& c : n.children()) walk(*c);
  };
  walk(t);
  return out;
}

namespace {

TermPtr MapLibRefs(const TermPtr& node,
                   const std::function<TermPtr(const Term&)>& fn) {
  if (node->kind() == Term::Kind::kLibRef) {
    TermPtr r = fn(*node);
    return r ? r : node;
  }
  if (node->children().empty()) return node;
  std::vector<TermPtr> next;
  next.reserve(node->children().size());
  bool changed = false;
  for (const auto& c : node->children()) {
    next.push_back(MapLibRefs(c, fn));
    changed |= next.back() != c;
  }
  return changed ? WithChildren(*node, std::move(next)) : node;
}

}  // namespace

TermPtr NameFreshModules(const TermPtr& root,
                         const std::function<std::string()>& next_name) {
  return MapLibRefs(root, [&](const Term& ref) -> TermPtr {
    if (!ref.fresh()) return nullptr;
    return Renamed(ref, next_name(), true);
  });
}

TermPtr EraseFreshNames(const TermPtr& root) {
  return MapLibRefs(root, [](const Term& ref) -> TermPtr {
    if (!ref.fresh() || ref.name().empty()) return nullptr;
    return Renamed(ref, "", true);
  });
}

int MaxHoleId(const Term& t) {
  int best = t.is_hole() ? t.hole_id() : -1;
  for (const auto& c : t.children()) best = std::max(best, MaxHoleId(*c));
  return best;
}

}  // namespace neurosyn

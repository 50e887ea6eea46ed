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

#include <set>

#include "doctest.h"
#include "neurosyn/syntax.h"
#include "neurosyn/typing.h"
#include "random_terms.h"

namespace neurosyn {
namespace {

const TensorType kT{Atom::kReal, {16}};
const TensorType kR1{Atom::kReal, {1}};
const TensorType kB1{Atom::kBool, {1}};

Type Fn(Type a, Type b) { return Type::Function(std::move(a), std::move(b)); }
Type T(TensorType t) { return Type::Tensor(std::move(t)); }

TEST_CASE("map and fold rules") {
  auto f = Term::LibRef("f", Fn(T(kT), T(kB1)));
  CHECK(InferType(*Term::Map(AdtKind::kList, f)) ==
        Fn(Type::List(kT), Type::List(kB1)));
  CHECK(InferType(*Term::Map(AdtKind::kGraph, f)) ==
        Fn(Type::Graph(kT), Type::Graph(kB1)));

  auto body = Term::LibRef("acc", Fn(T(kR1), Fn(T(kT), T(kR1))));
  auto fold = Term::Fold(AdtKind::kList, body, Term::Zeros(1));
  CHECK(InferType(*fold) == Fn(Type::List(kT), T(kR1)));
  // Seed of the wrong width.
  CHECK_THROWS_AS(InferType(*Term::Fold(AdtKind::kList, body, Term::Zeros(2))),
                  TypeError);
}

TEST_CASE("compose mismatch names the root") {
  auto f = Term::LibRef("f", Fn(T(kT), T(kB1)));
  auto h = Term::LibRef("h", Fn(T(kB1), T(kR1)));
  try {
    InferType(*Term::Compose(f, h));
    FAIL("expected a type error");
  } catch (const TypeError& e) {
    CHECK(e.path().empty());
  }
  // Mismatch deeper down reports the inner path.
  auto bad = Term::Map(AdtKind::kList, Term::Compose(f, h));
  try {
    InferType(*bad);
    FAIL("expected a type error");
  } catch (const TypeError& e) {
    CHECK(e.path() == TermPath{0});
  }
}

TEST_CASE("conv rules") {
  auto k = Term::LibRef("k", Fn(Type::List(kT), T(kR1)));
  CHECK(InferType(*Term::Conv(AdtKind::kGraph, k, 1)) ==
        Fn(Type::Graph(kT), Type::Graph(kR1)));
  CHECK_THROWS_AS(InferType(*Term::Conv(AdtKind::kGraph, k, 3)), TypeError);
  auto relax = Term::LibRef("r", Fn(Type::List(kT), T(kT)));
  CHECK(InferType(*Term::Conv(AdtKind::kList, relax, 4)) ==
        Fn(Type::List(kT), Type::List(kT)));
  auto not_list = Term::LibRef("m", Fn(T(kT), T(kT)));
  CHECK_THROWS_AS(InferType(*Term::Conv(AdtKind::kList, not_list, 1)),
                  TypeError);
}

TEST_CASE("check_type") {
  Type ab = Fn(T(kT), T(kB1));
  CHECK(CheckType(*Term::LibRef("f", ab), ab));
  CHECK(CheckType(*Term::Hole(ab, 0), ab));
  CHECK_FALSE(CheckType(*Term::Map(AdtKind::kList, Term::LibRef("f", ab)),
                        Fn(Type::Graph(kT), Type::Graph(kB1))));
  FreshDeclarations lib = {{"f", ab}};
  NameResolver resolve = WithFreshDeclarations(lib, nullptr);
  CHECK(CheckType(*Term::LibRef("f", ab), ab, resolve));
  CHECK_THROWS_AS(CheckType(*Term::LibRef("g", ab), ab, resolve),
                  std::invalid_argument);
  // A reference recorded with a signature the library disagrees with.
  CHECK_FALSE(CheckType(*Term::LibRef("f", Fn(T(kT), T(kR1))),
                        Fn(T(kT), T(kR1)), resolve));
}

TEST_CASE("no subtyping between atoms") {
  auto f = Term::LibRef("f", Fn(T(kR1), T(kR1)));
  auto g = Term::LibRef("g", Fn(T(kT), T(kB1)));
  CHECK_THROWS_AS(InferType(*Term::Compose(f, g)), TypeError);
}

TEST_CASE("universe enumeration") {
  UniverseConfig atoms;
  atoms.tensors = CrossShapes({Atom::kBool, Atom::kReal}, {{}});
  atoms.adts = {};
  atoms.max_function_depth = 1;
  TypeUniverse u(atoms);
  std::vector<std::string> got;
  for (const Type& t : u.Enumerate()) got.push_back(t.ToString());
  CHECK(got == std::vector<std::string>{"bool", "real", "bool -> bool",
                                        "bool -> real", "real -> bool",
                                        "real -> real"});
  CHECK(u.Size() == 6);

  // Cross-product oracle: D data types give D + D^2 first-order types.
  UniverseConfig one;
  one.tensors = CrossShapes({Atom::kBool, Atom::kReal}, {{1}});
  one.adts = {AdtKind::kList};
  one.max_function_depth = 1;
  TypeUniverse v(one);
  auto all = v.Enumerate();
  std::set<Type> data;
  for (Atom a : {Atom::kBool, Atom::kReal}) {
    data.insert(Type::Tensor(a, {1}));
    data.insert(Type::List(TensorType{a, {1}}));
  }
  std::set<Type> expected = data;
  for (const Type& a : data) {
    for (const Type& b : data) expected.insert(Fn(a, b));
  }
  CHECK(std::set<Type>(all.begin(), all.end()) == expected);
  CHECK(all.size() == expected.size());
  CHECK(v.Size() == static_cast<long>(expected.size()));

  // Depth 2 closes over depth-1 functions exactly once.
  one.max_function_depth = 2;
  TypeUniverse w(one);
  auto deep = w.Enumerate();
  CHECK(std::set<Type>(deep.begin(), deep.end()).size() == deep.size());
  CHECK(w.Size() == static_cast<long>(deep.size()));
  for (const Type& t : deep) CHECK(w.Contains(t));
  CHECK_FALSE(w.Contains(Fn(Fn(Fn(T(kR1), T(kR1)), T(kR1)), T(kR1))));
  CHECK_FALSE(w.Contains(T(kT)));
}

TEST_CASE("universe config errors") {
  UniverseConfig empty;
  CHECK_THROWS_AS(EnumerateUniverse(empty), std::invalid_argument);
  UniverseConfig too_big;
  too_big.tensors = {TensorType{Atom::kReal, {65}}};
  CHECK_THROWS_AS(EnumerateUniverse(too_big), std::invalid_argument);
  too_big.tensors = {TensorType{Atom::kReal, {1, 1, 1, 1}}};
  CHECK_THROWS_AS(EnumerateUniverse(too_big), std::invalid_argument);
}

TEST_CASE("inference is a function and holes substitute soundly") {
  std::vector<TensorType> tensors = {kT, kR1, kB1, {Atom::kReal, {8, 8}}};
  testing::RandomTerms gen(7, tensors);
  for (int i = 0; i < 300; ++i) {
    auto [t, type] = gen.AnyProgram(10);
    CHECK(InferType(*t) == InferType(*t));
    // Cut out any subterm; the hole typed by its slot keeps the root type,
    // and plugging the subterm back restores the original.
    auto slots = EnumerateSubtermSlots(t);
    const auto& slot = slots[gen.Pick(slots.size())];
    TermPtr hole = Term::Hole(slot.type, 0);
    TermPtr partial = ReplaceAt(t, slot.path, hole);
    CHECK(InferType(*partial) == type);
    CHECK(CheckType(*Subterm(t, slot.path), slot.type));
    CHECK(InferType(*ReplaceAt(partial, slot.path, Subterm(t, slot.path))) ==
          type);
  }
}

}  // namespace
}  // namespace neurosyn

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

// Test-only random term builder. Deliberately independent of the
// synthesizers: it derives a term for a requested type directly from the
// typing rules, naming every leaf `f<k>` and recording its signature.

#ifndef NEUROSYN_TESTS_RANDOM_TERMS_H_
#define NEUROSYN_TESTS_RANDOM_TERMS_H_

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "neurosyn/syntax.h"
#include "neurosyn/term.h"
#include "neurosyn/types.h"

namespace neurosyn::testing {

class RandomTerms {
 public:
  RandomTerms(std::uint64_t seed, std::vector<TensorType> tensors)
      : rng_(seed), tensors_(std::move(tensors)) {}

  // Leaf signatures handed out so far.
  const FreshDeclarations& leaves() const { return leaves_; }

  NameResolver Resolver() const {
    return WithFreshDeclarations(leaves_, nullptr);
  }

  TensorType AnyTensor() { return tensors_[Pick(tensors_.size())]; }

  Type AnyData() {
    switch (Pick(3)) {
      case 0:
        return Type::Tensor(AnyTensor());
      case 1:
        return Type::List(AnyTensor());
      default:
        return Type::Graph(AnyTensor());
    }
  }

  // A term of type in -> out, or nullopt when the budget runs out before a
  // derivation is found.
  std::optional<TermPtr> Function(const Type& in, const Type& out,
                                  int budget) {
    if (budget <= 0) return std::nullopt;
    std::vector<int> options;
    bool leaf_ok = Admissible(in, out);
    if (leaf_ok) options.push_back(0);
    if (budget >= 3) options.push_back(1);
    if (in.is_adt() && out.is_adt() && in.adt() == out.adt() && budget >= 2) {
      options.push_back(2);
      options.push_back(3);
    }
    if (in.is_adt() && out.is_tensor() && IsRealVector(out.tensor()) &&
        budget >= 3) {
      options.push_back(4);
    }
    for (int attempt = 0; attempt < 4 && !options.empty(); ++attempt) {
      int choice = options[Pick(options.size())];
      std::optional<TermPtr> t;
      switch (choice) {
        case 0:
          return Leaf(Type::Function(in, out));
        case 1: {
          Type mid = AnyData();
          int left = 1 + static_cast<int>(Pick(budget - 2));
          auto inner = Function(in, mid, budget - 1 - left);
          if (!inner) break;
          auto outer = Function(mid, out, left);
          if (!outer) break;
          t = Term::Compose(*outer, *inner);
          break;
        }
        case 2: {
          auto body = Function(Type::Tensor(in.tensor()),
                               Type::Tensor(out.tensor()), budget - 1);
          if (body) t = Term::Map(in.adt(), *body);
          break;
        }
        case 3: {
          auto kernel = Function(Type::List(in.tensor()),
                                 Type::Tensor(out.tensor()), budget - 1);
          if (!kernel) break;
          int repeat = in.tensor() == out.tensor() ? 1 + static_cast<int>(Pick(3)) : 1;
          t = Term::Conv(in.adt(), *kernel, repeat);
          break;
        }
        case 4: {
          Type acc = out;
          TermPtr body = Leaf(Type::Function(
              acc, Type::Function(Type::Tensor(in.tensor()), acc)));
          t = Term::Fold(in.adt(), body, Term::Zeros(out.tensor().dims[0]));
          break;
        }
      }
      if (t) return t;
    }
    if (leaf_ok) return Leaf(Type::Function(in, out));
    return std::nullopt;
  }

  // Random well-typed complete term with a random data-to-data type.
  std::pair<TermPtr, Type> AnyProgram(int budget) {
    for (;;) {
      Type in = AnyData();
      Type out = Pick(2) ? Type::Tensor(AnyTensor()) : AnyData();
      if (out.is_adt() && in.is_adt() && Pick(2)) {
        out = Type::Adt(in.adt(), out.tensor());
      }
      auto t = Function(in, out, budget);
      if (t) return {*t, Type::Function(in, out)};
    }
  }

  std::uint64_t Pick(std::size_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng_);
  }

  // Signatures realizable by a single neural module.
  static bool Admissible(const Type& in, const Type& out) {
    return (in.is_tensor() || in.kind() == Type::Kind::kList) &&
           out.is_tensor();
  }

  static bool IsRealVector(const TensorType& t) {
    return t.atom == Atom::kReal && t.rank() == 1;
  }

  TermPtr Leaf(const Type& signature) {
    std::string name = "f" + std::to_string(leaves_.size());
    leaves_.emplace(name, signature);
    return Term::LibRef(name, signature, true);
  }

 private:
  std::mt19937_64 rng_;
  std::vector<TensorType> tensors_;
  FreshDeclarations leaves_;
};

}  // namespace neurosyn::testing

#endif  // NEUROSYN_TESTS_RANDOM_TERMS_H_

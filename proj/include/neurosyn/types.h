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

#ifndef NEUROSYN_TYPES_H_
#define NEUROSYN_TYPES_H_

#include <compare>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace neurosyn {

// `bool` is a real value relaxed into [0, 1]; it is kept distinct from
// `real` so the type system can track sigmoid outputs.
enum class Atom : unsigned char { kBool, kReal };

enum class AdtKind : unsigned char { kList, kGraph };

struct TensorType {
  Atom atom = Atom::kReal;
  std::vector<int> dims;  // empty = scalar

  int rank() const { return static_cast<int>(dims.size()); }
  long NumElements() const;

  friend bool operator==(const TensorType&, const TensorType&) = default;
  friend std::strong_ordering operator<=>(const TensorType& a,
                                          const TensorType& b);
};

// Immutable structural type. Function payloads are shared between copies.
class Type {
 public:
  enum class Kind : unsigned char { kTensor, kList, kGraph, kFunction };

  Type() = default;  // real scalar

  static Type Tensor(TensorType t);
  static Type Tensor(Atom atom, std::vector<int> dims);
  static Type Adt(AdtKind adt, TensorType element);
  static Type List(TensorType element) { return Adt(AdtKind::kList, std::move(element)); }
  static Type Graph(TensorType element) { return Adt(AdtKind::kGraph, std::move(element)); }
  static Type Function(Type input, Type output);

  Kind kind() const { return kind_; }
  bool is_tensor() const { return kind_ == Kind::kTensor; }
  bool is_adt() const { return kind_ == Kind::kList || kind_ == Kind::kGraph; }
  bool is_function() const { return kind_ == Kind::kFunction; }
  bool is_data() const { return kind_ != Kind::kFunction; }
  AdtKind adt() const;

  // Tensor payload of a tensor type, or the element type of an ADT.
  const TensorType& tensor() const;
  const Type& input() const;
  const Type& output() const;

  // 0 for data types; 1 + max(depth(in), depth(out)) for functions.
  int depth() const;

  std::string ToString() const;
  std::size_t Hash() const;

  friend bool operator==(const Type& a, const Type& b);
  friend std::strong_ordering operator<=>(const Type& a, const Type& b);

 private:
  struct FunctionPayload;

  Kind kind_ = Kind::kTensor;
  TensorType tensor_;
  std::shared_ptr<const FunctionPayload> fn_;
};

struct Type::FunctionPayload {
  Type input;
  Type output;
};

struct TypeHash {
  std::size_t operator()(const Type& t) const { return t.Hash(); }
};

class TypeSyntaxError : public std::runtime_error {
 public:
  TypeSyntaxError(const std::string& what, std::size_t offset)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Parses the textual type syntax, e.g. "list<real[8][8]> -> real[1]".
// Arrows associate to the right; parentheses group a function argument.
Type ParseType(std::string_view text);

// Parses the longest type starting at `pos` (skipping whitespace) and
// advances `pos` past it. Used by the program parser for hole annotations.
Type ParseTypeAt(std::string_view text, std::size_t& pos);

std::string ToString(const TensorType& t);
const char* AdtPrefix(AdtKind adt);  // "list" / "graph"

}  // namespace neurosyn

#endif  // NEUROSYN_TYPES_H_

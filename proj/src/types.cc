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

#include "neurosyn/types.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace neurosyn {

long TensorType::NumElements() const {
  long n = 1;
  for (int d : dims) n *= d;
  return n;
}

std::strong_ordering operator<=>(const TensorType& a, const TensorType& b) {
  if (auto c = a.atom <=> b.atom; c != 0) return c;
  if (auto c = a.dims.size() <=> b.dims.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.dims.size(); ++i) {
    if (auto c = a.dims[i] <=> b.dims[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

Type Type::Tensor(TensorType t) {
  for (int d : t.dims) {
    if (d < 1) throw std::invalid_argument("tensor dimension must be >= 1");
  }
  Type out;
  out.kind_ = Kind::kTensor;
  out.tensor_ = std::move(t);
  return out;
}

Type Type::Tensor(Atom atom, std::vector<int> dims) {
  return Tensor(TensorType{atom, std::move(dims)});
}

Type Type::Adt(AdtKind adt, TensorType element) {
  Type out = Tensor(std::move(element));
  out.kind_ = adt == AdtKind::kList ? Kind::kList : Kind::kGraph;
  return out;
}

Type Type::Function(Type input, Type output) {
  Type out;
  out.kind_ = Kind::kFunction;
  out.fn_ = std::make_shared<const FunctionPayload>(
      FunctionPayload{std::move(input), std::move(output)});
  return out;
}

AdtKind Type::adt() const {
  if (kind_ == Kind::kList) return AdtKind::kList;
  if (kind_ == Kind::kGraph) return AdtKind::kGraph;
  throw std::logic_error("adt() on non-ADT type " + ToString());
}

const TensorType& Type::tensor() const {
  if (kind_ == Kind::kFunction) {
    throw std::logic_error("tensor() on function type " + ToString());
  }
  return tensor_;
}

const Type& Type::input() const {
  if (kind_ != Kind::kFunction) {
    throw std::logic_error("input() on data type " + ToString());
  }
  return fn_->input;
}

const Type& Type::output() const {
  if (kind_ != Kind::kFunction) {
    throw std::logic_error("output() on data type " + ToString());
  }
  return fn_->output;
}

int Type::depth() const {
  if (kind_ != Kind::kFunction) return 0;
  return 1 + std::max(fn_->input.depth(), fn_->output.depth());
}

std::string ToString(const TensorType& t) {
  std::string s = t.atom == Atom::kBool ? "bool" : "real";
  for (int d : t.dims) s += "[" + std::to_string(d) + "]";
  return s;
}

const char* AdtPrefix(AdtKind adt) {
  return adt == AdtKind::kList ? "list" : "graph";
}

std::string Type::ToString() const {
  switch (kind_) {
    case Kind::kTensor:
      return neurosyn::ToString(tensor_);
    case Kind::kList:
      return "list<" + neurosyn::ToString(tensor_) + ">";
    case Kind::kGraph:
      return "graph<" + neurosyn::ToString(tensor_) + ">";
    case Kind::kFunction: {
      std::string in = fn_->input.ToString();
      if (fn_->input.is_function()) in = "(" + in + ")";
      return in + " -> " + fn_->output.ToString();
    }
  }
  return {};
}

std::size_t Type::Hash() const {
  std::size_t h = static_cast<std::size_t>(kind_) * 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  if (kind_ == Kind::kFunction) {
    mix(fn_->input.Hash());
    mix(fn_->output.Hash());
  } else {
    mix(static_cast<std::size_t>(tensor_.atom));
    for (int d : tensor_.dims) mix(static_cast<std::size_t>(d));
  }
  return h;
}

bool operator==(const Type& a, const Type& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ == Type::Kind::kFunction) {
    return a.fn_ == b.fn_ ||
           (a.fn_->input == b.fn_->input && a.fn_->output == b.fn_->output);
  }
  return a.tensor_ == b.tensor_;
}

std::strong_ordering operator<=>(const Type& a, const Type& b) {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  if (a.kind_ == Type::Kind::kFunction) {
    if (auto c = a.fn_->input <=> b.fn_->input; c != 0) return c;
    return a.fn_->output <=> b.fn_->output;
  }
  return a.tensor_ <=> b.tensor_;
}

namespace {

class TypeParser {
 public:
  TypeParser(std::string_view text, std::size_t pos) : text_(text), pos_(pos) {}

  Type ParseArrow() {
    Type lhs = ParsePrimary();
    SkipSpace();
    if (text_.substr(pos_, 2) == "->") {
      pos_ += 2;
      Type rhs = ParseArrow();
      return Type::Function(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  std::size_t pos() const { return pos_; }

  void SkipSpace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  [[noreturn]] void Fail(const std::string& msg) const {
    std::ostringstream os;
    os << "type syntax error at offset " << pos_ << ": " << msg;
    throw TypeSyntaxError(os.str(), pos_);
  }

 private:
  bool Consume(std::string_view token) {
    SkipSpace();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void Expect(std::string_view token) {
    if (!Consume(token)) Fail("expected '" + std::string(token) + "'");
  }

  TensorType ParseTensor() {
    TensorType t;
    if (Consume("bool")) {
      t.atom = Atom::kBool;
    } else if (Consume("real")) {
      t.atom = Atom::kReal;
    } else {
      Fail("expected 'bool' or 'real'");
    }
    while (true) {
      SkipSpace();
      if (pos_ >= text_.size() || text_[pos_] != '[') break;
      ++pos_;
      SkipSpace();
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      if (start == pos_) Fail("expected dimension");
      int d = std::stoi(std::string(text_.substr(start, pos_ - start)));
      if (d < 1) Fail("dimension must be >= 1");
      t.dims.push_back(d);
      Expect("]");
    }
    return t;
  }

  Type ParsePrimary() {
    SkipSpace();
    if (Consume("(")) {
      Type inner = ParseArrow();
      Expect(")");
      return inner;
    }
    if (Consume("list")) {
      Expect("<");
      TensorType el = ParseTensor();
      Expect(">");
      return Type::List(std::move(el));
    }
    if (Consume("graph")) {
      Expect("<");
      TensorType el = ParseTensor();
      Expect(">");
      return Type::Graph(std::move(el));
    }
    return Type::Tensor(ParseTensor());
  }

  std::string_view text_;
  std::size_t pos_;
};

}  // namespace

Type ParseTypeAt(std::string_view text, std::size_t& pos) {
  TypeParser parser(text, pos);
  Type t = parser.ParseArrow();
  pos = parser.pos();
  return t;
}

Type ParseType(std::string_view text) {
  TypeParser parser(text, 0);
  Type t = parser.ParseArrow();
  parser.SkipSpace();
  if (parser.pos() != text.size()) parser.Fail("trailing input");
  return t;
}

}  // namespace neurosyn

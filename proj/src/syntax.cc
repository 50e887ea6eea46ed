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

#include "neurosyn/syntax.h"

#include <cctype>
#include <sstream>

namespace neurosyn {

ProgramSyntaxError::ProgramSyntaxError(const std::string& message, int line,
                                       int column)
    : std::runtime_error(message), line_(line), column_(column) {}

namespace {

std::string Located(const std::string& message, int line, int column) {
  std::ostringstream os;
  os << "line " << line << ", column " << column << ": " << message;
  return os.str();
}

}  // namespace

UnknownNameError::UnknownNameError(const std::string& name, int line,
                                   int column)
    : ProgramSyntaxError(Located("unknown library name '" + name + "'", line,
                                 column),
                         line, column),
      name_(name) {}

namespace {

class ProgramParser {
 public:
  ProgramParser(std::string_view text, const NameResolver& resolve)
      : text_(text), resolve_(resolve) {}

  TermPtr ParseAll() {
    TermPtr t = ParseProg();
    SkipSpace();
    if (pos_ != text_.size()) Fail("unexpected trailing input");
    return t;
  }

 private:
  void SkipSpace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  void LineColumn(std::size_t offset, int& line, int& column) const {
    line = 1;
    column = 1;
    for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  }

  [[noreturn]] void FailAt(std::size_t offset, const std::string& msg) const {
    int line, column;
    LineColumn(offset, line, column);
    throw ProgramSyntaxError(Located(msg, line, column), line, column);
  }

  [[noreturn]] void Fail(const std::string& msg) const { FailAt(pos_, msg); }

  bool Peek(char c) {
    SkipSpace();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void Expect(char c) {
    if (!Peek(c)) Fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string Identifier() {
    SkipSpace();
    std::size_t start = pos_;
    if (pos_ < text_.size() &&
        (std::isalpha(static_cast<unsigned char>(text_[pos_])) ||
         text_[pos_] == '_')) {
      ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_' || text_[pos_] == '.')) {
        ++pos_;
      }
    }
    if (start == pos_) Fail("expected a program");
    return std::string(text_.substr(start, pos_ - start));
  }

  int Integer(const char* what) {
    SkipSpace();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (start == pos_ || pos_ - start > 9) {
      FailAt(start, std::string("malformed ") + what);
    }
    int v = std::stoi(std::string(text_.substr(start, pos_ - start)));
    if (v < 1) FailAt(start, std::string("malformed ") + what);
    return v;
  }

  TermPtr ParseProg() {
    SkipSpace();
    std::size_t start = pos_;
    std::string id = Identifier();

    if (id == "hole" && Peek('<')) {
      ++pos_;
      Type t;
      try {
        t = ParseTypeAt(text_, pos_);
      } catch (const TypeSyntaxError& e) {
        FailAt(e.offset(), e.what());
      }
      Expect('>');
      return Term::Hole(std::move(t), next_hole_id_++);
    }
    if ((id == "conv_l" || id == "conv_g") && (Peek('^') || Peek('('))) {
      int repeat = 1;
      if (Peek('^')) {
        ++pos_;
        repeat = Integer("repeat exponent");
      }
      Expect('(');
      TermPtr kernel = ParseProg();
      Expect(')');
      return Term::Conv(id == "conv_l" ? AdtKind::kList : AdtKind::kGraph,
                        std::move(kernel), repeat);
    }
    if (Peek('(')) {
      if (id == "compose") {
        ++pos_;
        TermPtr outer = ParseProg();
        Expect(',');
        TermPtr inner = ParseProg();
        Expect(')');
        return Term::Compose(std::move(outer), std::move(inner));
      }
      if (id == "map_l" || id == "map_g") {
        ++pos_;
        TermPtr body = ParseProg();
        Expect(')');
        return Term::Map(id == "map_l" ? AdtKind::kList : AdtKind::kGraph,
                         std::move(body));
      }
      if (id == "fold_l" || id == "fold_g") {
        ++pos_;
        TermPtr body = ParseProg();
        Expect(',');
        TermPtr init = ParseProg();
        Expect(')');
        return Term::Fold(id == "fold_l" ? AdtKind::kList : AdtKind::kGraph,
                          std::move(body), std::move(init));
      }
      if (id == "zeros") {
        ++pos_;
        int d = Integer("zeros dimension");
        Expect(')');
        return Term::Zeros(d);
      }
    }
    std::optional<NameInfo> info = resolve_ ? resolve_(id) : std::nullopt;
    if (!info) {
      int line, column;
      LineColumn(start, line, column);
      throw UnknownNameError(id, line, column);
    }
    return Term::LibRef(id, info->signature, info->fresh);
  }

  std::string_view text_;
  const NameResolver& resolve_;
  std::size_t pos_ = 0;
  int next_hole_id_ = 0;
};

void Print(const Term& t, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::kLibRef:
      if (t.name().empty()) {
        out += "new<" + t.type_annotation().ToString() + ">";
      } else {
        out += t.name();
      }
      return;
    case Term::Kind::kCompose:
      out += "compose(";
      Print(*t.child(0), out);
      out += ", ";
      Print(*t.child(1), out);
      out += ")";
      return;
    case Term::Kind::kMap:
      out += t.adt() == AdtKind::kList ? "map_l(" : "map_g(";
      Print(*t.child(0), out);
      out += ")";
      return;
    case Term::Kind::kFold:
      out += t.adt() == AdtKind::kList ? "fold_l(" : "fold_g(";
      Print(*t.child(0), out);
      out += ", ";
      Print(*t.child(1), out);
      out += ")";
      return;
    case Term::Kind::kConv:
      out += t.adt() == AdtKind::kList ? "conv_l" : "conv_g";
      if (t.repeat() != 1) out += "^" + std::to_string(t.repeat());
      out += "(";
      Print(*t.child(0), out);
      out += ")";
      return;
    case Term::Kind::kZeros:
      out += "zeros(" + std::to_string(t.zeros_dim()) + ")";
      return;
    case Term::Kind::kHole:
      out += "hole<" + t.type_annotation().ToString() + ">";
      return;
  }
}

}  // namespace

TermPtr ParseProgram(std::string_view text, const NameResolver& resolve) {
  return ProgramParser(text, resolve).ParseAll();
}

NameResolver WithFreshDeclarations(const FreshDeclarations& fresh,
                                   NameResolver fallback) {
  return [fresh, fallback = std::move(fallback)](
             std::string_view name) -> std::optional<NameInfo> {
    if (auto it = fresh.find(name); it != fresh.end()) {
      return NameInfo{it->second, true};
    }
    return fallback ? fallback(name) : std::nullopt;
  };
}

std::string PrintProgram(const Term& term) {
  std::string out;
  Print(term, out);
  return out;
}

}  // namespace neurosyn

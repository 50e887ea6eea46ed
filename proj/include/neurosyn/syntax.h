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

// Textual program syntax:
//
//   prog := name | "compose(" prog "," prog ")" | ("map_l(" | "map_g(") prog ")"
//         | ("fold_l(" | "fold_g(") prog "," prog ")"
//         | ("conv_l" | "conv_g") ["^" int] "(" prog ")"
//         | "zeros(" int ")" | "hole<" type-text ">"
//
// Whitespace is insignificant. Names match [a-zA-Z_][a-zA-Z0-9_.]*.

#ifndef NEUROSYN_SYNTAX_H_
#define NEUROSYN_SYNTAX_H_

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "neurosyn/term.h"

namespace neurosyn {

struct NameInfo {
  Type signature;
  bool fresh = false;
};

// Maps a referenced name to its signature; nullopt for unknown names.
using NameResolver = std::function<std::optional<NameInfo>(std::string_view)>;

// Declarations of a candidate's fresh modules, by name.
using FreshDeclarations = std::map<std::string, Type, std::less<>>;

class ProgramSyntaxError : public std::runtime_error {
 public:
  ProgramSyntaxError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class UnknownNameError : public ProgramSyntaxError {
 public:
  UnknownNameError(const std::string& name, int line, int column);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

// Holes receive ids 0, 1, ... in order of appearance.
TermPtr ParseProgram(std::string_view text, const NameResolver& resolve);

// Resolver over fresh declarations followed by `fallback`.
NameResolver WithFreshDeclarations(const FreshDeclarations& fresh,
                                   NameResolver fallback);

// Canonical text. Unnamed fresh modules render as `new<type-text>`, which
// the parser does not accept; name them first.
std::string PrintProgram(const Term& term);

}  // namespace neurosyn

#endif  // NEUROSYN_SYNTAX_H_

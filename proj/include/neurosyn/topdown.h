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

// Type-directed program enumeration: the production grammar shared by the
// synthesizers, best-first top-down search, and the program census.

#ifndef NEUROSYN_TOPDOWN_H_
#define NEUROSYN_TOPDOWN_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "neurosyn/library.h"
#include "neurosyn/trainer.h"
#include "neurosyn/typing.h"

namespace neurosyn {

struct GrammarConfig {
  // Exponents offered for conv_l / conv_g. Exponents above 1 only apply to
  // kernels whose output equals their element type.
  std::vector<int> conv_repeats = {1};
  // ADT instantiations of map/fold/conv; empty means the universe's.
  std::vector<AdtKind> adts;
  bool fresh_modules = true;
  bool zeros = true;
};

// Productions of the point-free grammar over a library and a finite type
// universe. Every production is instantiated at a concrete head type.
class Grammar {
 public:
  Grammar(Library library, TypeUniverse universe, GrammarConfig config = {});

  const Library& library() const { return library_; }
  const TypeUniverse& universe() const { return universe_; }
  const GrammarConfig& config() const { return config_; }
  const std::vector<AdtKind>& adts() const { return adts_; }

  // One term per production whose type is `type`, in a fixed order:
  // library modules, fresh module, zeros, compose (one per intermediate),
  // map, fold, conv (one per exponent). New holes are numbered from
  // `next_hole`.
  std::vector<TermPtr> Productions(const Type& type, int next_hole) const;

  // Leaf symbols of the untyped alphabet: frozen modules, one fresh
  // template per admissible module signature in the universe, and zeros(d)
  // for every real vector in the universe.
  long UntypedLeaves() const;

 private:
  Library library_;
  TypeUniverse universe_;
  GrammarConfig config_;
  std::vector<AdtKind> adts_;
};

struct SearchConfig {
  GrammarConfig grammar;
  // Partial programs costing more are discarded.
  int max_size = 6;
  int max_candidates = 20;
  // Partial program the search starts from; null means one hole of the
  // task type. Only its holes are refined.
  TermPtr sketch;
};

struct Subtask {
  TermPtr program;
  // Path of the leftmost hole; empty optional for complete programs.
  std::optional<TermPath> focus;
  // Program size with every hole costed at 1.
  int cost = 0;
  // Insertion order; breaks cost ties first-in first-out.
  long seq = 0;
};

int SubtaskCost(const Term& program);

// The single subtask holding an empty program of the target type.
Subtask InitialSubtask(const Type& target);

// Children of a subtask: one per production for its focused hole. Complete
// subtasks have no children.
std::vector<Subtask> Expand(const Subtask& subtask, const Grammar& grammar);

// Best-first enumeration of complete programs in nondecreasing size.
class TopDownSearch {
 public:
  TopDownSearch(const Type& target, const Grammar& grammar, int max_size);
  // Starts from a partial program instead of a single hole.
  TopDownSearch(TermPtr start, const Grammar& grammar, int max_size);

  // Next complete, previously unseen program; nullptr once exhausted.
  TermPtr Next();
  long expanded() const { return expanded_; }

 private:
  struct Later {
    bool operator()(const Subtask& a, const Subtask& b) const {
      return a.cost != b.cost ? a.cost > b.cost : a.seq > b.seq;
    }
  };

  const Grammar& grammar_;
  int max_size_;
  long next_seq_ = 0;
  long expanded_ = 0;
  std::priority_queue<Subtask, std::vector<Subtask>, Later> queue_;
  std::unordered_set<std::string> seen_;
};

class SynthesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// First `limit` complete programs of the search, unnamed.
std::vector<TermPtr> EnumeratePrograms(const Type& target, const Grammar& grammar,
                                       int max_size, int limit);

// Names fresh modules of each program <prefix>_1, <prefix>_2, ... in
// program order then preorder.
std::vector<TermPtr> NameCandidates(const std::vector<TermPtr>& programs,
                                    const std::string& prefix);

struct SynthesisResult {
  std::string strategy;
  // Ranked best first.
  std::vector<TrainedCandidate> candidates;
  long expanded = 0;
  // Evolutionary rounds run.
  int generations = 0;
  // False when nothing trained to a finite validation loss.
  bool solved() const;
};

// Enumerates up to max_candidates programs of the task type, trains them
// (on up to `jobs` threads) and ranks by validation loss. Throws
// SynthesisError when the search yields no complete program or the sketch
// does not have the task type.
SynthesisResult SynthesizeTopDown(const Task& task, const Grammar& grammar,
                                  const SearchConfig& search, const TrainConfig& train,
                                  const std::string& name_prefix, int jobs = 1);

nlohmann::json SynthesisJson(const SynthesisResult& result, int top = 0);

// Memoized counts of complete programs per (type, size) under a grammar.
class ProgramCounter {
 public:
  explicit ProgramCounter(const Grammar& grammar) : grammar_(grammar) {}

  std::uint64_t Count(const Type& type, int size);
  // Smallest size with at least one program, or 0 if none up to `limit`.
  int MinSize(const Type& type, int limit);

 private:
  std::uint64_t Fill(const std::vector<Type>& holes, std::size_t i, int budget);

  const Grammar& grammar_;
  std::map<std::pair<Type, int>, std::uint64_t> memo_;
};

// Number of complete programs of exactly `size`: typed counts type-safe
// programs of the target type, untyped counts arity-valid programs over
// the untyped alphabet.
std::uint64_t CensusTyped(const Type& target, const Grammar& grammar, int size);
std::uint64_t CensusUntyped(const Grammar& grammar, int size);

}  // namespace neurosyn

#endif  // NEUROSYN_TOPDOWN_H_

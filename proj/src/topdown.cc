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

#include "neurosyn/topdown.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "neurosyn/syntax.h"

namespace neurosyn {

Grammar::Grammar(Library library, TypeUniverse universe, GrammarConfig config)
    : library_(std::move(library)), universe_(std::move(universe)), config_(std::move(config)) {
  adts_ = config_.adts.empty() ? universe_.config().adts : config_.adts;
  for (int n : config_.conv_repeats) {
    if (n < 1) throw std::invalid_argument("conv exponents must be >= 1");
  }
}

std::vector<TermPtr> Grammar::Productions(const Type& type, int next_hole) const {
  std::vector<TermPtr> out;
  auto allowed = [&](AdtKind a) {
    return std::find(adts_.begin(), adts_.end(), a) != adts_.end();
  };

  if (type.is_function()) {
    for (const ModulePtr& m : library_.Matching(type)) {
      out.push_back(Term::LibRef(m->name(), type, false));
    }
    if (config_.fresh_modules && IsModuleSignature(type)) {
      out.push_back(Term::LibRef("", type, true));
    }
  } else if (config_.zeros && type.is_tensor() && type.tensor().atom == Atom::kReal &&
             type.tensor().rank() == 1) {
    out.push_back(Term::Zeros(type.tensor().dims[0]));
  }
  if (!type.is_function()) return out;

  const Type& in = type.input();
  const Type& result = type.output();
  for (const Type& mid : universe_.data_types()) {
    if (mid.is_adt() && !allowed(mid.adt())) continue;
    out.push_back(Term::Compose(Term::Hole(Type::Function(mid, result), next_hole),
                                Term::Hole(Type::Function(in, mid), next_hole + 1)));
  }
  if (!in.is_adt() || !allowed(in.adt())) return out;
  const AdtKind adt = in.adt();
  const TensorType& elem = in.tensor();
  const Type elem_type = Type::Tensor(elem);
  if (result.is_adt() && result.adt() == adt) {
    const Type out_elem = Type::Tensor(result.tensor());
    out.push_back(Term::Map(adt, Term::Hole(Type::Function(elem_type, out_elem), next_hole)));
  }
  if (result.is_tensor()) {
    Type body = Type::Function(result, Type::Function(elem_type, result));
    out.push_back(Term::Fold(adt, Term::Hole(body, next_hole), Term::Hole(result, next_hole + 1)));
  }
  if (result.is_adt() && result.adt() == adt) {
    const Type kernel = Type::Function(Type::List(elem), Type::Tensor(result.tensor()));
    for (int n : config_.conv_repeats) {
      if (n > 1 && !(result.tensor() == elem)) continue;
      out.push_back(Term::Conv(adt, Term::Hole(kernel, next_hole), n));
    }
  }
  return out;
}

long Grammar::UntypedLeaves() const {
  long leaves = static_cast<long>(library_.size());
  if (config_.fresh_modules) {
    for (const Type& t : universe_.Enumerate()) {
      if (t.is_function() && IsModuleSignature(t)) ++leaves;
    }
  }
  if (config_.zeros) {
    for (const TensorType& t : universe_.tensors()) {
      if (t.atom == Atom::kReal && t.rank() == 1) ++leaves;
    }
  }
  return leaves;
}

int SubtaskCost(const Term& program) { return ProgramSize(program) + program.NumHoles(); }

namespace {

Subtask MakeSubtask(TermPtr program, long seq) {
  Subtask s;
  s.cost = SubtaskCost(*program);
  std::vector<TermPath> holes = HolePaths(program);
  if (!holes.empty()) s.focus = holes.front();
  s.program = std::move(program);
  s.seq = seq;
  return s;
}

std::string Canonical(const TermPtr& program) {
  return PrintProgram(*EraseFreshNames(program));
}

}  // namespace

Subtask InitialSubtask(const Type& target) { return MakeSubtask(Term::Hole(target, 0), 0); }

std::vector<Subtask> Expand(const Subtask& subtask, const Grammar& grammar) {
  std::vector<Subtask> children;
  if (!subtask.focus) return children;
  const TermPtr& hole = Subterm(subtask.program, *subtask.focus);
  const int next = MaxHoleId(*subtask.program) + 1;
  for (TermPtr production : grammar.Productions(hole->type_annotation(), next)) {
    children.push_back(
        MakeSubtask(ReplaceAt(subtask.program, *subtask.focus, std::move(production)), 0));
  }
  return children;
}

TopDownSearch::TopDownSearch(const Type& target, const Grammar& grammar, int max_size)
    : TopDownSearch(Term::Hole(target, 0), grammar, max_size) {}

TopDownSearch::TopDownSearch(TermPtr start, const Grammar& grammar, int max_size)
    : grammar_(grammar), max_size_(max_size) {
  if (max_size < 1) throw std::invalid_argument("max_size must be >= 1");
  Subtask root = MakeSubtask(std::move(start), next_seq_++);
  if (root.cost <= max_size_) queue_.push(std::move(root));
}

TermPtr TopDownSearch::Next() {
  while (!queue_.empty()) {
    Subtask top = queue_.top();
    queue_.pop();
    if (!top.focus) {
      if (seen_.insert(Canonical(top.program)).second) return top.program;
      continue;
    }
    ++expanded_;
    for (Subtask& child : Expand(top, grammar_)) {
      if (child.cost > max_size_) continue;
      child.seq = next_seq_++;
      queue_.push(std::move(child));
    }
  }
  return nullptr;
}

std::vector<TermPtr> EnumeratePrograms(const Type& target, const Grammar& grammar, int max_size,
                                       int limit) {
  TopDownSearch search(target, grammar, max_size);
  std::vector<TermPtr> out;
  while (static_cast<int>(out.size()) < limit) {
    TermPtr p = search.Next();
    if (!p) break;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<TermPtr> NameCandidates(const std::vector<TermPtr>& programs,
                                    const std::string& prefix) {
  int k = 0;
  std::vector<TermPtr> out;
  out.reserve(programs.size());
  for (const TermPtr& p : programs) {
    out.push_back(NameFreshModules(p, [&] { return prefix + "_" + std::to_string(++k); }));
  }
  return out;
}

SynthesisResult SynthesizeTopDown(const Task& task, const Grammar& grammar,
                                  const SearchConfig& search, const TrainConfig& train,
                                  const std::string& name_prefix, int jobs) {
  if (search.max_candidates < 1) throw std::invalid_argument("max_candidates must be >= 1");
  if (!grammar.universe().Contains(task.type)) {
    throw SynthesisError("task type " + task.type.ToString() + " is outside the type universe");
  }
  if (search.sketch && !CheckType(*search.sketch, task.type)) {
    throw SynthesisError("sketch " + PrintProgram(*search.sketch) + " does not have type " +
                         task.type.ToString());
  }
  TopDownSearch enumerator(search.sketch ? search.sketch : Term::Hole(task.type, 0), grammar,
                           search.max_size);
  std::vector<TermPtr> programs;
  while (static_cast<int>(programs.size()) < search.max_candidates) {
    TermPtr p = enumerator.Next();
    if (!p) break;
    programs.push_back(std::move(p));
  }
  if (programs.empty()) {
    throw SynthesisError("no complete program of type " + task.type.ToString() +
                         " within size " + std::to_string(search.max_size) +
                         "; the universe or grammar is too small");
  }
  SynthesisResult result;
  result.strategy = "topdown";
  result.expanded = enumerator.expanded();
  result.candidates =
      TrainAll(NameCandidates(programs, name_prefix), task, grammar.library(), train, jobs);
  Rank(result.candidates);
  return result;
}

bool SynthesisResult::solved() const {
  return !candidates.empty() && std::isfinite(candidates.front().val_loss);
}

nlohmann::json SynthesisJson(const SynthesisResult& result, int top) {
  nlohmann::json j;
  j["strategy"] = result.strategy;
  if (result.strategy == "evolve") {
    j["generations"] = result.generations;
  } else {
    j["expanded"] = result.expanded;
  }
  j["trained"] = result.candidates.size();
  j["solved"] = result.solved();
  j["candidates"] = nlohmann::json::array();
  int n = static_cast<int>(result.candidates.size());
  if (top > 0) n = std::min(n, top);
  for (int i = 0; i < n; ++i) j["candidates"].push_back(CandidateJson(result.candidates[i]));
  return j;
}

std::uint64_t ProgramCounter::Count(const Type& type, int size) {
  if (size < 1) return 0;
  auto key = std::make_pair(type, size);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  std::uint64_t total = 0;
  for (const TermPtr& production : grammar_.Productions(type, 0)) {
    std::vector<Type> holes;
    for (const TermPath& p : HolePaths(production)) {
      holes.push_back(Subterm(production, p)->type_annotation());
    }
    total += Fill(holes, 0, size - ProgramSize(*production));
  }
  memo_.emplace(key, total);
  return total;
}

// Ways to complete holes[i..] with total size exactly `budget`.
std::uint64_t ProgramCounter::Fill(const std::vector<Type>& holes, std::size_t i, int budget) {
  if (i == holes.size()) return budget == 0 ? 1 : 0;
  const int rest = static_cast<int>(holes.size() - i - 1);
  std::uint64_t total = 0;
  for (int s = 1; s <= budget - rest; ++s) {
    std::uint64_t here = Count(holes[i], s);
    if (here != 0) total += here * Fill(holes, i + 1, budget - s);
  }
  return total;
}

int ProgramCounter::MinSize(const Type& type, int limit) {
  for (int s = 1; s <= limit; ++s) {
    if (Count(type, s) > 0) return s;
  }
  return 0;
}

std::uint64_t CensusTyped(const Type& target, const Grammar& grammar, int size) {
  ProgramCounter counter(grammar);
  return counter.Count(target, size);
}

std::uint64_t CensusUntyped(const Grammar& grammar, int size) {
  if (size < 1) return 0;
  const std::uint64_t leaves = grammar.UntypedLeaves();
  const std::uint64_t adts = grammar.adts().size();
  // compose plus one fold per ADT; one map and one conv per exponent per ADT.
  const std::uint64_t binary = 1 + adts;
  const std::uint64_t unary = adts * (1 + grammar.config().conv_repeats.size());
  std::vector<std::uint64_t> u(size + 1, 0);
  for (int s = 1; s <= size; ++s) {
    std::uint64_t n = s == 1 ? leaves : 0;
    n += unary * u[s - 1];
    for (int a = 1; a + 1 <= s - 1; ++a) n += binary * u[a] * u[s - 1 - a];
    u[s] = n;
  }
  return u[size];
}

}  // namespace neurosyn

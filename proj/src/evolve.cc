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

#include "neurosyn/evolve.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "neurosyn/seed.h"
#include "neurosyn/syntax.h"

namespace neurosyn {

namespace {

std::size_t Uniform(std::size_t n, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

Real Unit(Rng& rng) { return std::uniform_real_distribution<Real>(0, 1)(rng); }

std::vector<Type> HoleTypes(const TermPtr& t) {
  std::vector<Type> out;
  for (const TermPath& p : HolePaths(t)) out.push_back(Subterm(t, p)->type_annotation());
  return out;
}

std::string Canonical(const TermPtr& p) { return PrintProgram(*EraseFreshNames(p)); }

std::vector<SubtermSlot> EditableSlots(const TermPtr& t, const std::vector<TermPath>& editable) {
  std::vector<SubtermSlot> slots = EnumerateSubtermSlots(t);
  if (editable.empty()) return slots;
  std::erase_if(slots, [&](const SubtermSlot& s) {
    return std::none_of(editable.begin(), editable.end(), [&](const TermPath& root) {
      return s.path.size() >= root.size() && std::equal(root.begin(), root.end(), s.path.begin());
    });
  });
  return slots;
}

}  // namespace

int ProgramSampler::MinSize(const Type& type) { return counter_.MinSize(type, limit_); }

TermPtr ProgramSampler::Sample(const Type& type, int max_size, Rng& rng) {
  limit_ = max_size;
  if (max_size < 1 || MinSize(type) == 0) return nullptr;
  return Fill(type, max_size, rng);
}

TermPtr ProgramSampler::Fill(const Type& type, int budget, Rng& rng) {
  struct Option {
    TermPtr term;
    std::vector<Type> holes;
    std::vector<int> mins;
    int min_total;
  };
  std::vector<Option> options;
  for (TermPtr p : grammar_.Productions(type, 0)) {
    Option o{p, HoleTypes(p), {}, ProgramSize(*p)};
    bool ok = true;
    for (const Type& h : o.holes) {
      int m = MinSize(h);
      if (m == 0) ok = false;
      o.mins.push_back(m);
      o.min_total += m;
    }
    if (ok && o.min_total <= budget) options.push_back(std::move(o));
  }
  if (options.empty()) return nullptr;
  Option& pick = options[Uniform(options.size(), rng)];
  return FillHoles(pick.term, pick.holes, pick.mins, budget - pick.min_total, rng);
}

TermPtr ProgramSampler::FillHoles(TermPtr term, const std::vector<Type>& holes,
                                  const std::vector<int>& mins, int slack, Rng& rng) {
  std::vector<TermPath> paths = HolePaths(term);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    TermPtr sub = Fill(holes[i], mins[i] + slack, rng);
    slack -= ProgramSize(*sub) - mins[i];
    term = ReplaceAt(term, paths[i], sub);
  }
  return term;
}

TermPtr ProgramSampler::Complete(const TermPtr& partial, int max_size, Rng& rng) {
  limit_ = max_size;
  std::vector<Type> holes = HoleTypes(partial);
  std::vector<int> mins;
  int total = ProgramSize(*partial);
  for (const Type& h : holes) {
    mins.push_back(MinSize(h));
    if (mins.back() == 0) return nullptr;
    total += mins.back();
  }
  if (total > max_size) return nullptr;
  return FillHoles(partial, holes, mins, max_size - total, rng);
}

Real Fitness(Real val_loss) {
  if (!std::isfinite(val_loss) || val_loss < 0) return 0;
  return 1 / (1 + val_loss);
}

Population InitPopulation(const Type& target, const Grammar& grammar, int n, int max_size,
                          Rng& rng) {
  return InitPopulation(Term::Hole(target, 0), grammar, n, max_size, rng);
}

Population InitPopulation(const TermPtr& sketch, const Grammar& grammar, int n, int max_size,
                          Rng& rng) {
  if (n < 2) throw std::invalid_argument("population size must be >= 2");
  ProgramSampler sampler(grammar);
  Population pop;
  for (int i = 0; i < n; ++i) {
    TermPtr p = sampler.Complete(sketch, max_size, rng);
    if (!p) {
      throw SynthesisError("cannot complete " + PrintProgram(*sketch) + " within size " +
                           std::to_string(max_size));
    }
    pop.members.push_back({p, std::nullopt});
  }
  return pop;
}

Population Select(const Population& population, Rng& rng) {
  std::vector<Real> weights;
  Real total = 0;
  for (const Member& m : population.members) {
    if (!m.fitness) throw std::invalid_argument("selection needs every member evaluated");
    weights.push_back(*m.fitness);
    total += *m.fitness;
  }
  if (total <= 0) std::fill(weights.begin(), weights.end(), Real(1));
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  Population out;
  out.generation = population.generation;
  for (std::size_t i = 0; i < population.members.size(); ++i) {
    out.members.push_back(population.members[pick(rng)]);
  }
  return out;
}

std::pair<TermPtr, TermPtr> Crossover(const TermPtr& a, const TermPtr& b, Rng& rng,
                                      const std::vector<TermPath>& editable) {
  std::vector<SubtermSlot> sa = EditableSlots(a, editable);
  std::vector<SubtermSlot> sb = EditableSlots(b, editable);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    for (std::size_t j = 0; j < sb.size(); ++j) {
      if (sa[i].type == sb[j].type) pairs.emplace_back(i, j);
    }
  }
  if (pairs.empty()) return {a, b};
  auto [i, j] = pairs[Uniform(pairs.size(), rng)];
  TermPtr from_a = Subterm(a, sa[i].path);
  TermPtr from_b = Subterm(b, sb[j].path);
  return {ReplaceAt(a, sa[i].path, from_b), ReplaceAt(b, sb[j].path, from_a)};
}

TermPtr Mutate(const TermPtr& program, ProgramSampler& sampler, int max_growth, Rng& rng,
               const std::vector<TermPath>& editable) {
  std::vector<SubtermSlot> slots = EditableSlots(program, editable);
  if (slots.empty()) return program;
  const SubtermSlot& slot = slots[Uniform(slots.size(), rng)];
  const int bound = ProgramSize(*Subterm(program, slot.path)) + std::max(0, max_growth);
  TermPtr replacement = sampler.Sample(slot.type, bound, rng);
  if (!replacement) return program;
  return ReplaceAt(program, slot.path, replacement);
}

SynthesisResult Evolve(const Task& task, const Grammar& grammar, const EvolveConfig& config,
                       const TrainConfig& train, const std::string& name_prefix, int jobs) {
  if (config.generations < 0) throw std::invalid_argument("generations must be >= 0");
  if (!grammar.universe().Contains(task.type)) {
    throw SynthesisError("task type " + task.type.ToString() + " is outside the type universe");
  }
  Rng rng(DeriveSeed(config.seed, 0xE7017E));
  ProgramSampler sampler(grammar);
  if (config.sketch && !CheckType(*config.sketch, task.type)) {
    throw SynthesisError("sketch " + PrintProgram(*config.sketch) + " does not have type " +
                         task.type.ToString());
  }
  const TermPtr start = config.sketch ? config.sketch : Term::Hole(task.type, 0);
  const std::vector<TermPath> editable = HolePaths(start);
  Population pop = InitPopulation(start, grammar, config.population, config.max_size, rng);

  SynthesisResult result;
  result.strategy = "evolve";
  std::map<std::string, std::size_t> evaluated;
  std::vector<TrainedCandidate>& all = result.candidates;
  int names = 0;
  for (int gen = 0;; ++gen) {
    std::vector<TermPtr> batch;
    std::vector<std::string> keys;
    for (const Member& m : pop.members) {
      std::string key = Canonical(m.program);
      if (evaluated.count(key) || std::find(keys.begin(), keys.end(), key) != keys.end()) continue;
      keys.push_back(key);
      batch.push_back(
          NameFreshModules(m.program, [&] { return name_prefix + "_" + std::to_string(++names); }));
    }
    std::vector<TrainedCandidate> trained =
        TrainAll(batch, task, grammar.library(), train, jobs, static_cast<int>(all.size()));
    for (std::size_t i = 0; i < trained.size(); ++i) {
      evaluated[keys[i]] = all.size();
      all.push_back(std::move(trained[i]));
    }
    Real best = INFINITY;
    for (Member& m : pop.members) {
      const TrainedCandidate& c = all[evaluated.at(Canonical(m.program))];
      m.fitness = Fitness(c.val_loss);
      if (c.val_loss < best) best = c.val_loss;
    }
    result.generations = gen;
    if (gen == config.generations) break;
    if (config.target_loss && best <= *config.target_loss) break;

    pop = Select(pop, rng);
    for (std::size_t i = 0; i + 1 < pop.members.size(); i += 2) {
      if (Unit(rng) < config.p_crossover) {
        auto [x, y] = Crossover(pop.members[i].program, pop.members[i + 1].program, rng, editable);
        pop.members[i] = {x, std::nullopt};
        pop.members[i + 1] = {y, std::nullopt};
      }
    }
    for (Member& m : pop.members) {
      if (Unit(rng) < config.p_mutation) {
        m = {Mutate(m.program, sampler, config.max_growth, rng, editable), std::nullopt};
      }
    }
    pop.generation = gen + 1;
  }
  Rank(all);
  return result;
}

}  // namespace neurosyn

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

// Evolutionary program synthesis over typed terms.

#ifndef NEUROSYN_EVOLVE_H_
#define NEUROSYN_EVOLVE_H_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "neurosyn/topdown.h"

namespace neurosyn {

using Rng = std::mt19937_64;

// Random typed derivations: at each hole, a production is drawn uniformly
// among those that can still be completed within the size budget.
class ProgramSampler {
 public:
  explicit ProgramSampler(const Grammar& grammar) : grammar_(grammar), counter_(grammar) {}

  // A complete program of `type` with size <= max_size; nullptr if none.
  TermPtr Sample(const Type& type, int max_size, Rng& rng);
  // Fills every hole of `partial` so the result has size <= max_size.
  TermPtr Complete(const TermPtr& partial, int max_size, Rng& rng);

 private:
  TermPtr Fill(const Type& type, int budget, Rng& rng);
  TermPtr FillHoles(TermPtr term, const std::vector<Type>& holes, const std::vector<int>& mins,
                    int slack, Rng& rng);
  int MinSize(const Type& type);

  const Grammar& grammar_;
  ProgramCounter counter_;
  int limit_ = 0;
};

struct Member {
  TermPtr program;
  std::optional<Real> fitness;
};

struct Population {
  std::vector<Member> members;
  int generation = 0;
};

// 1 / (1 + loss); zero for non-finite losses.
Real Fitness(Real val_loss);

Population InitPopulation(const Type& target, const Grammar& grammar, int n, int max_size,
                          Rng& rng);
// Completions of a partial program instead of free derivations.
Population InitPopulation(const TermPtr& sketch, const Grammar& grammar, int n, int max_size,
                          Rng& rng);

// Fitness-proportional sampling with replacement (uniform if every fitness
// is zero). Throws std::invalid_argument for an unevaluated member.
Population Select(const Population& population, Rng& rng);

// Swaps a uniformly drawn pair of equal-typed subterms. Parents without
// such a pair are returned unchanged. A non-empty `editable` restricts both
// sides to subterms at or below one of the given paths.
std::pair<TermPtr, TermPtr> Crossover(const TermPtr& a, const TermPtr& b, Rng& rng,
                                      const std::vector<TermPath>& editable = {});

// Replaces a uniformly drawn subterm by a sampled term of the same type no
// larger than the original subterm plus `max_growth`.
TermPtr Mutate(const TermPtr& program, ProgramSampler& sampler, int max_growth, Rng& rng,
               const std::vector<TermPath>& editable = {});

struct EvolveConfig {
  int population = 20;
  int generations = 5;
  Real p_crossover = 0.5;
  Real p_mutation = 0.3;
  int max_growth = 2;
  int max_size = 6;
  std::uint64_t seed = 1;
  // Stops early once the best validation loss reaches this value.
  std::optional<Real> target_loss;
  // Partial program whose holes are evolved; its other nodes stay fixed.
  TermPtr sketch;
};

// Evaluates (training each distinct program once), selects, recombines and
// mutates for `generations` rounds. Returns every distinct evaluated
// program ranked; `solved()` is false when nothing trained successfully.
SynthesisResult Evolve(const Task& task, const Grammar& grammar, const EvolveConfig& config,
                       const TrainConfig& train, const std::string& name_prefix, int jobs = 1);

}  // namespace neurosyn

#endif  // NEUROSYN_EVOLVE_H_

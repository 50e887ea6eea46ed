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

// Gradient verification of module templates and whole programs.

#ifndef NEUROSYN_VERIFY_H_
#define NEUROSYN_VERIFY_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "neurosyn/gradcheck.h"
#include "neurosyn/interpreter.h"

namespace neurosyn {

// Conforming random value: normal reals, uniform [0, 1] bools, lists of
// length 1..4, square grids of side 2..3.
Value RandomInput(const Type& type, int batch, std::mt19937_64& rng);

// One fresh module per distinct named fresh reference.
ModuleSet InstantiateFresh(const TermPtr& program, const ModuleHyper& hyper, std::uint64_t seed);

struct GradcheckRow {
  std::string subject;
  GradCheckResult result;
};

// Every template kind (MLP, curried MLP, rank-2 and rank-3 CNN, LSTM,
// residual LSTM) at small sizes.
std::vector<GradcheckRow> TemplateGradchecks(std::uint64_t seed,
                                             const GradCheckOptions& options = {});
// `count` programs drawn at random from a small list/graph grammar.
std::vector<GradcheckRow> ProgramGradchecks(std::uint64_t seed, int count,
                                            const GradCheckOptions& options = {});

bool AllPassed(const std::vector<GradcheckRow>& rows);
nlohmann::json GradcheckJson(const std::vector<GradcheckRow>& rows);

}  // namespace neurosyn

#endif  // NEUROSYN_VERIFY_H_

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

// Task sequences: synthesize per task, freeze the winner's modules into the
// library, and report reuse, baselines and forgetting checks.

#ifndef NEUROSYN_LIFELONG_H_
#define NEUROSYN_LIFELONG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "neurosyn/evolve.h"
#include "neurosyn/taskgen.h"
#include "neurosyn/topdown.h"

namespace neurosyn {

class SequenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SequenceTask {
  // recognize_glyph, classify_glyph, count_glyph, sum_glyph, regress_glyph,
  // regress_color, shortest_path_glyph, shortest_path_color.
  std::string generator;
  int digit = 0;
  int n = 1000;
  Real fraction = 1;
  // Also train the standalone baseline on this task.
  bool baseline = false;
  // Partial program (with hole<type> placeholders) the search starts from.
  std::string sketch;
  std::optional<int> max_candidates;
  std::optional<int> epochs;
};

struct SequenceSpec {
  std::string name = "sequence";
  std::uint64_t seed = 1;
  UniverseConfig universe;
  GrammarConfig grammar;
  int max_size = 6;
  int max_candidates = 20;
  TrainConfig train;
  EvolveConfig evolve;
  std::vector<SequenceTask> tasks;
};

// Accepts a full sequence object or a bare array of tasks. Without a
// "universe", the tensors and ADTs of the task types are used. Throws
// SequenceError on unknown keys, generators or malformed values. With
// `require_tasks` false an object without "tasks" is accepted as plain
// settings (universe left empty unless given).
SequenceSpec ParseSequence(const nlohmann::json& j, bool require_tasks = true);
SequenceSpec ReadSequence(const std::filesystem::path& path);
nlohmann::json SequenceSpecJson(const SequenceSpec& spec);

Type SequenceTaskType(const SequenceTask& task);
// Adds the tensors and ADT kinds occurring in `type` to `universe`.
void AddToUniverse(const Type& type, UniverseConfig& universe);
Task MakeSequenceTask(const SequenceTask& task, std::uint64_t seed);

enum class Strategy { kTopDown, kEvolve };
Strategy ParseStrategy(const std::string& text);
const char* ToString(Strategy s);

// Fixed RNN over map(MLP . CNN) for list tasks. Graph tasks are linearized
// row-wise into lists and processed by a whole-grid LSTM window over the
// same mapped features. Throws SequenceError for other task shapes.
TermPtr BaselineProgram(const Task& task);
// The list view of a graph task (same node order and targets).
Task LinearizeGrid(const Task& task);
TrainedCandidate StandaloneBaseline(const Task& task, const TrainConfig& config);

struct TaskOutcome {
  int index = 0;
  SequenceTask spec;
  std::string task_name;
  Type type;
  bool solved = false;
  // Valid when solved; fresh modules carry their library names.
  TrainedCandidate best;
  // Every trained candidate, best first; the report lists the top three.
  std::vector<TrainedCandidate> ranked;
  long trained = 0;
  std::size_t library_before = 0, library_after = 0;
  std::vector<std::string> added;
  std::vector<std::string> reused;
  bool high_level = false, low_level = false;
  std::optional<TrainedCandidate> baseline;
  double seconds = 0;
};

struct SequenceReport {
  std::string name;
  Strategy strategy = Strategy::kTopDown;
  std::uint64_t seed = 1;
  std::vector<TaskOutcome> tasks;
  Library library;
  // Serialized parameters of each library module when it was added.
  std::vector<std::pair<std::string, std::string>> checkpoints;
};

struct RunOptions {
  Strategy strategy = Strategy::kTopDown;
  int jobs = 1;
  // Library snapshots library_<k>/ after each task, when set.
  std::optional<std::filesystem::path> out_dir;
  // Starting library (default empty).
  Library library;
};

SequenceReport RunSequence(const SequenceSpec& spec, const RunOptions& options);

// Reused lib.* names in order of first appearance.
std::vector<std::string> ReusedModules(const Term& program);
// High level: a reused module consumes a list or graph, or is curried (an
// aggregator, kernel or fold body). Low level: any other reused module.
std::pair<bool, bool> TransferFlags(const Term& program, const Library& library);

// The best program with its fresh references renamed to their library
// names; evaluable against the library alone.
TermPtr FrozenForm(const Term& program);

struct ForgettingCheck {
  int task = 0;
  Real recorded = 0, reevaluated = 0;
  bool metric_identical = false;
  bool checkpoints_identical = false;
};

// Regenerates every solved task, re-scores its best program on the test
// split against the final library, and compares the metric bit for bit
// and each module's parameters with their bytes when frozen.
std::vector<ForgettingCheck> CheckForgetting(const SequenceSpec& spec,
                                             const SequenceReport& report);

nlohmann::json ReportJson(const SequenceReport& report);
// One row per task: synthesized and baseline test metrics at the
// configured fraction, reuse flags.
nlohmann::json TransferJson(const SequenceReport& report);
nlohmann::json ForgettingJson(const std::vector<ForgettingCheck>& checks);

}  // namespace neurosyn

#endif  // NEUROSYN_LIFELONG_H_

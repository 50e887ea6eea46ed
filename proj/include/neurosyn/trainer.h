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

// Parameter fitting, scoring and ranking of candidate programs.

#ifndef NEUROSYN_TRAINER_H_
#define NEUROSYN_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "neurosyn/interpreter.h"
#include "neurosyn/taskgen.h"

namespace neurosyn {

enum class LossKind { kMse, kBce, kCrossEntropy };
enum class MetricKind { kErrorPercent, kRmse };

const char* ToString(LossKind kind);
const char* ToString(MetricKind kind);

// bool atom -> BCE; classification -> cross-entropy; otherwise MSE.
LossKind SelectLoss(const Type& output, bool classification);
MetricKind MetricFor(LossKind loss);

// Mean loss over rows of [N, ...] predictions.
Var ComputeLoss(LossKind kind, const Var& prediction, const Tensor& target);
// Error % (0.5 threshold or argmax) or RMSE over all entries.
Real ComputeMetric(MetricKind kind, const Tensor& prediction, const Tensor& target);

struct TrainConfig {
  enum class Optim { kAdam, kSgd };
  Optim optimizer = Optim::kAdam;
  Real lr = 1e-3;
  int batch = 32;
  // 0 selects 5 for graph inputs and 20 otherwise.
  int epochs = 0;
  std::uint64_t seed = 1;
  std::optional<LossKind> loss;
  ModuleHyper hyper;
  int eval_batch = 256;
  // Convolution radius and degree bound; train and seed are set per step.
  EvalOptions eval;
};

int DefaultEpochs(const Type& task_type);

struct EpochLog {
  int epoch;
  Real train_loss;
  Real val_loss;
  Real val_metric;
};

struct TrainedCandidate {
  TermPtr program;
  int index = 0;
  int size = 0;
  // Fresh modules hold the best-validation parameters.
  ModuleSet modules;
  LossKind loss = LossKind::kMse;
  MetricKind metric = MetricKind::kRmse;
  Real val_loss = 0;
  Real train_metric = 0, val_metric = 0, test_metric = 0;
  int best_epoch = 0;
  int epochs_run = 0;
  bool diverged = false;
  std::string divergence;
  std::vector<EpochLog> log;
};

struct SplitScore {
  Real loss;
  Real metric;
};

// Eval-mode loss and metric of a complete program over a split.
SplitScore ScoreSplit(const Term& program, const ModuleSet& modules, const Split& split,
                      LossKind loss, MetricKind metric, int eval_batch = 256,
                      const EvalOptions& options = {});

// Instantiates one fresh module per distinct fresh name (preorder, seeded
// by candidate seed), then trains. Fresh references must be named.
TrainedCandidate Train(const TermPtr& program, const Task& task, const Library& library,
                       const TrainConfig& config, int index = 0);
// Trains the unfrozen parameters of an already-built module set.
TrainedCandidate TrainModules(const TermPtr& program, ModuleSet modules, const Task& task,
                              const TrainConfig& config, int index = 0);

// Trains every program on up to `jobs` threads; results are in input
// order and do not depend on `jobs`.
std::vector<TrainedCandidate> TrainAll(const std::vector<TermPtr>& programs, const Task& task,
                                       const Library& library, const TrainConfig& config,
                                       int jobs, int first_index = 0);

// Ascending validation loss (NaN as +inf), then size, then index.
void Rank(std::vector<TrainedCandidate>& candidates);

nlohmann::json CandidateJson(const TrainedCandidate& c, bool with_log = false);
// One JSON object per epoch.
void WriteTrainingLog(const TrainedCandidate& c, const std::filesystem::path& path);

}  // namespace neurosyn

#endif  // NEUROSYN_TRAINER_H_

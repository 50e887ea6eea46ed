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

#include "neurosyn/trainer.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <thread>

#include "neurosyn/seed.h"
#include "neurosyn/syntax.h"
#include "neurosyn/typing.h"

namespace neurosyn {

const char* ToString(LossKind kind) {
  switch (kind) {
    case LossKind::kMse: return "mse";
    case LossKind::kBce: return "bce";
    case LossKind::kCrossEntropy: return "cross_entropy";
  }
  return "?";
}

const char* ToString(MetricKind kind) {
  return kind == MetricKind::kRmse ? "rmse" : "error_percent";
}

LossKind SelectLoss(const Type& output, bool classification) {
  if (output.is_function()) {
    throw std::invalid_argument("no loss for function-typed output " + output.ToString());
  }
  const TensorType& t = output.tensor();
  if (t.atom == Atom::kBool) return LossKind::kBce;
  if (classification && output.is_tensor() && t.rank() == 1) return LossKind::kCrossEntropy;
  return LossKind::kMse;
}

MetricKind MetricFor(LossKind loss) {
  return loss == LossKind::kMse ? MetricKind::kRmse : MetricKind::kErrorPercent;
}

Var ComputeLoss(LossKind kind, const Var& prediction, const Tensor& target) {
  switch (kind) {
    case LossKind::kMse: return MseLoss(prediction, target);
    case LossKind::kBce: return BceLoss(prediction, target);
    case LossKind::kCrossEntropy: return CrossEntropyLoss(prediction, target);
  }
  throw std::logic_error("unknown loss");
}

Real ComputeMetric(MetricKind kind, const Tensor& prediction, const Tensor& target) {
  if (prediction.shape() != target.shape()) {
    ThrowShapeMismatch("metric", prediction.shape(), target.shape());
  }
  if (prediction.size() == 0) throw std::invalid_argument("metric over an empty split");
  if (kind == MetricKind::kRmse) {
    Real sum = 0;
    for (long i = 0; i < prediction.size(); ++i) {
      Real d = prediction[i] - target[i];
      sum += d * d;
    }
    return std::sqrt(sum / prediction.size());
  }
  const long rows = prediction.shape()[0];
  const long width = prediction.size() / rows;
  long wrong = 0;
  for (long r = 0; r < rows; ++r) {
    const Real* p = prediction.data() + r * width;
    const Real* t = target.data() + r * width;
    if (width == 1) {
      wrong += (p[0] >= 0.5) != (t[0] >= 0.5);
    } else {
      wrong += std::max_element(p, p + width) - p != std::max_element(t, t + width) - t;
    }
  }
  return 100.0 * static_cast<Real>(wrong) / static_cast<Real>(rows);
}

int DefaultEpochs(const Type& task_type) {
  return task_type.input().kind() == Type::Kind::kGraph ? 5 : 20;
}

namespace {

// Eval-mode predictions for the whole split, rows concatenated in order.
Tensor Predict(const Term& program, const ModuleSet& modules, const Value& x, int eval_batch,
               EvalOptions options) {
  options.train = false;
  Interpreter interp(modules, options);
  const int n = x.batch();
  std::vector<Tensor> parts;
  for (int start = 0; start < n; start += eval_batch) {
    std::vector<int> idx(std::min(eval_batch, n - start));
    std::iota(idx.begin(), idx.end(), start);
    parts.push_back(interp.Apply(program, SelectSamples(x, idx)).data.value());
  }
  Shape shape = parts.at(0).shape();
  shape[0] = 0;
  for (const Tensor& p : parts) shape[0] += p.shape()[0];
  Tensor out(shape);
  long at = 0;
  for (const Tensor& p : parts) {
    std::copy_n(p.data(), p.size(), out.data() + at);
    at += p.size();
  }
  return out;
}

bool Finite(Real v) { return std::isfinite(v); }

std::vector<std::vector<Tensor>> SnapshotAll(const ModuleSet& modules) {
  std::vector<std::vector<Tensor>> out;
  for (const auto& [name, m] : modules.fresh()) out.push_back(m->params().Snapshot());
  return out;
}

void RestoreAll(ModuleSet& modules, const std::vector<std::vector<Tensor>>& snap) {
  std::size_t i = 0;
  for (const auto& [name, m] : modules.fresh()) {
    if (!m->frozen()) m->mutable_params().Restore(snap[i]);
    ++i;
  }
}

}  // namespace

SplitScore ScoreSplit(const Term& program, const ModuleSet& modules, const Split& split,
                      LossKind loss, MetricKind metric, int eval_batch,
                      const EvalOptions& options) {
  if (split.size() == 0) throw std::invalid_argument("cannot score an empty split");
  Tensor pred = Predict(program, modules, split.x, eval_batch, options);
  const Tensor& target = split.y.data.value();
  Real l = ComputeLoss(loss, Constant(pred), target).value().item();
  return {l, ComputeMetric(metric, pred, target)};
}

TrainedCandidate TrainModules(const TermPtr& program, ModuleSet modules, const Task& task,
                              const TrainConfig& config, int index) {
  if (!(config.lr > 0)) throw std::invalid_argument("learning rate must be > 0");
  if (config.batch < 1) throw std::invalid_argument("batch size must be >= 1");
  if (config.epochs < 0) throw std::invalid_argument("epochs must be >= 0 (0 selects the default)");
  if (!program->IsComplete()) throw std::invalid_argument("cannot train a partial program");
  Type t = InferType(*program, modules.Resolver());
  if (!(t == task.type)) {
    throw TypeError("program has type " + t.ToString() + ", task needs " +
                        task.type.ToString(),
                    {});
  }
  TrainedCandidate c;
  c.program = program;
  c.index = index;
  c.size = ProgramSize(*program);
  c.loss = config.loss.value_or(SelectLoss(task.type.output(), task.classification));
  c.metric = MetricFor(c.loss);
  const std::uint64_t seed = DeriveSeed(config.seed, static_cast<std::uint64_t>(index));
  const int epochs = config.epochs > 0 ? config.epochs : DefaultEpochs(task.type);

  std::vector<Var> params = modules.TrainableParams();
  std::unique_ptr<Optimizer> opt;
  if (config.optimizer == TrainConfig::Optim::kAdam) {
    AdamConfig ac;
    ac.lr = config.lr;
    opt = std::make_unique<Adam>(params, ac);
  } else {
    opt = std::make_unique<Sgd>(params, config.lr);
  }

  SplitScore init = ScoreSplit(*program, modules, task.val, c.loss, c.metric, config.eval_batch,
                              config.eval);
  c.log.push_back({0, std::numeric_limits<Real>::quiet_NaN(), init.loss, init.metric});
  Real best = Finite(init.loss) ? init.loss : std::numeric_limits<Real>::infinity();
  auto snapshot = SnapshotAll(modules);

  std::mt19937_64 rng(DeriveSeed(seed, 0xB17C4));
  const int n = task.train.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::uint64_t step = 0;
  for (int epoch = 1; epoch <= epochs && !params.empty(); ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    Real total = 0;
    int batches = 0;
    for (int start = 0; start < n; start += config.batch) {
      std::vector<int> idx(order.begin() + start,
                           order.begin() + std::min(n, start + config.batch));
      Value xb = SelectSamples(task.train.x, idx);
      Tensor yb = SelectSamples(task.train.y, idx).data.value();
      EvalOptions eo = config.eval;
      eo.train = true;
      eo.seed = DeriveSeed(seed, ++step);
      Interpreter interp(modules, eo);
      Var loss = ComputeLoss(c.loss, interp.Apply(*program, xb).data, yb);
      Real lv = loss.value().item();
      if (!Finite(lv)) {
        c.diverged = true;
        c.divergence = "non-finite training loss at epoch " + std::to_string(epoch);
        break;
      }
      opt->ZeroGrad();
      Backward(loss);
      opt->Step();
      total += lv;
      ++batches;
    }
    if (c.diverged) {
      c.epochs_run = epoch;
      break;
    }
    SplitScore val = ScoreSplit(*program, modules, task.val, c.loss, c.metric, config.eval_batch,
                              config.eval);
    c.log.push_back({epoch, total / std::max(1, batches), val.loss, val.metric});
    c.epochs_run = epoch;
    if (!Finite(val.loss)) {
      c.diverged = true;
      c.divergence = "non-finite validation loss at epoch " + std::to_string(epoch);
      break;
    }
    if (val.loss < best) {
      best = val.loss;
      c.best_epoch = epoch;
      snapshot = SnapshotAll(modules);
    }
  }
  RestoreAll(modules, snapshot);
  c.modules = std::move(modules);
  SplitScore tr = ScoreSplit(*program, c.modules, task.train, c.loss, c.metric, config.eval_batch,
                              config.eval);
  SplitScore va = ScoreSplit(*program, c.modules, task.val, c.loss, c.metric, config.eval_batch,
                              config.eval);
  SplitScore te = ScoreSplit(*program, c.modules, task.test, c.loss, c.metric, config.eval_batch,
                              config.eval);
  c.train_metric = tr.metric;
  c.val_metric = va.metric;
  c.test_metric = te.metric;
  c.val_loss = c.diverged || !Finite(va.loss) ? std::numeric_limits<Real>::infinity() : va.loss;
  return c;
}

TrainedCandidate Train(const TermPtr& program, const Task& task, const Library& library,
                       const TrainConfig& config, int index) {
  ModuleSet modules(&library);
  const std::uint64_t seed = DeriveSeed(config.seed, static_cast<std::uint64_t>(index));
  std::set<std::string> seen;
  std::uint64_t k = 0;
  for (const TermPath& p : AllPaths(program)) {
    const Term& t = *Subterm(program, p);
    if (t.kind() != Term::Kind::kLibRef || !t.fresh()) continue;
    if (t.name().empty()) throw std::invalid_argument("fresh module reference without a name");
    if (!seen.insert(t.name()).second) continue;
    const Type& sig = t.type_annotation();
    bool cls = task.classification && sig.output() == task.type.output();
    modules.AddFresh(InstantiateFor(sig, cls, config.hyper, DeriveSeed(seed, 1000 + k++),
                                    t.name()));
  }
  return TrainModules(program, std::move(modules), task, config, index);
}

std::vector<TrainedCandidate> TrainAll(const std::vector<TermPtr>& programs, const Task& task,
                                       const Library& library, const TrainConfig& config,
                                       int jobs, int first_index) {
  std::vector<std::optional<TrainedCandidate>> slots(programs.size());
  std::vector<std::exception_ptr> errors(programs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < programs.size();) {
      try {
        slots[i] = Train(programs[i], task, library, config, first_index + static_cast<int>(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  int threads = std::max(1, std::min<int>(jobs, static_cast<int>(programs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::vector<TrainedCandidate> out;
  for (std::size_t i = 0; i < programs.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

void Rank(std::vector<TrainedCandidate>& candidates) {
  auto key = [](const TrainedCandidate& c) {
    return std::isnan(c.val_loss) ? std::numeric_limits<Real>::infinity() : c.val_loss;
  };
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](const TrainedCandidate& a, const TrainedCandidate& b) {
                     if (key(a) != key(b)) return key(a) < key(b);
                     if (a.size != b.size) return a.size < b.size;
                     return a.index < b.index;
                   });
}

namespace {

nlohmann::json Number(Real v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace

nlohmann::json CandidateJson(const TrainedCandidate& c, bool with_log) {
  nlohmann::json j = {{"index", c.index},
                      {"program", PrintProgram(*c.program)},
                      {"size", c.size},
                      {"loss", ToString(c.loss)},
                      {"metric", ToString(c.metric)},
                      {"val_loss", Number(c.val_loss)},
                      {"train_metric", Number(c.train_metric)},
                      {"val_metric", Number(c.val_metric)},
                      {"test_metric", Number(c.test_metric)},
                      {"best_epoch", c.best_epoch},
                      {"epochs_run", c.epochs_run},
                      {"diverged", c.diverged}};
  if (c.diverged) j["divergence"] = c.divergence;
  if (with_log) {
    nlohmann::json log = nlohmann::json::array();
    for (const EpochLog& e : c.log) {
      log.push_back({{"epoch", e.epoch},
                     {"train_loss", Number(e.train_loss)},
                     {"val_loss", Number(e.val_loss)},
                     {"val_metric", Number(e.val_metric)}});
    }
    j["log"] = std::move(log);
  }
  return j;
}

void WriteTrainingLog(const TrainedCandidate& c, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  for (const EpochLog& e : c.log) {
    out << nlohmann::json({{"epoch", e.epoch},
                           {"train_loss", Number(e.train_loss)},
                           {"val_loss", Number(e.val_loss)},
                           {"val_metric", Number(e.val_metric)}})
               .dump()
        << "\n";
  }
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace neurosyn

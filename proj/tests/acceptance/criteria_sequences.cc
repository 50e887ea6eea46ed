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

// Criteria 6-10: task sequences, forgetting and determinism.

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "acceptance/acceptance.h"
#include "neurosyn/lifelong.h"
#include "neurosyn/syntax.h"

namespace neurosyn::acceptance {
namespace {

namespace fs = std::filesystem;

constexpr int kSeeds = 5;
constexpr int kCountBudget = 20;
constexpr Real kCountRmse = 0.5;
constexpr double kCountSeconds = 15 * 60;
constexpr int kCountSeedsNeeded = 4;
constexpr int kTransferSeedsNeeded = 4;
constexpr Real kKernelRatio = 1.5;
constexpr int kKernelSeedsNeeded = 3;

fs::path Scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "neurosyn_acceptance";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct Run {
  SequenceSpec spec;
  SequenceReport report;
  fs::path dir;
};

// Each (config, seed) runs once per process; later criteria reuse it.
const Run& Sequence(const std::string& config, std::uint64_t seed) {
  static std::map<std::pair<std::string, std::uint64_t>, Run> cache;
  auto key = std::make_pair(config, seed);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  Run run;
  run.spec = ReadSequence(SourcePath("configs/" + config + ".json"));
  run.spec.seed = seed;
  run.dir = Scratch() / (config + "_seed" + std::to_string(seed));
  RunOptions options;
  options.out_dir = run.dir;
  run.report = RunSequence(run.spec, options);
  return cache.emplace(key, std::move(run)).first->second;
}

bool IsAggregator(const ModulePtr& m) {
  const Type& sig = m->signature();
  return sig.is_function() && sig.input().is_adt();
}

// The conv kernel of a relaxation program, or null.
const Term* Kernel(const Term& t) {
  if (t.kind() == Term::Kind::kConv) return t.child(0).get();
  for (const TermPtr& c : t.children()) {
    if (const Term* k = Kernel(*c)) return k;
  }
  return nullptr;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int Shell(const std::string& cmd) {
  int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Every regular file under `dir`, relative path -> bytes.
std::map<std::string, std::string> Tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  if (!fs::exists(dir)) return files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = Slurp(e.path());
  }
  return files;
}

}  // namespace

Outcome CountTopDown() {
  int good = 0;
  std::string detail;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    const Run& run = Sequence("cs1", seed);
    const TaskOutcome& t = run.report.tasks.at(2);
    int budget = t.spec.max_candidates.value_or(run.spec.max_candidates);
    bool ok = budget == kCountBudget && t.solved && t.best.test_metric <= kCountRmse &&
              t.seconds <= kCountSeconds;
    good += ok;
    detail += Format(" s%d=%.3f/%.0fs", seed, t.solved ? t.best.test_metric : INFINITY, t.seconds);
  }
  return {good >= kCountSeedsNeeded,
          Format("%d/%d seeds with test RMSE <= %.1f on lengths 6-8 within %.0f min:", good, kSeeds,
                 kCountRmse, kCountSeconds / 60) +
              detail};
}

Outcome CountTransfer() {
  int good = 0;
  std::string detail;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    const Run& run = Sequence("cs2", seed);
    const TaskOutcome& t = run.report.tasks.at(2);
    bool aggregator = false;
    for (const std::string& name : t.reused) {
      ModulePtr m = run.report.library.Find(name);
      aggregator = aggregator || (m && IsAggregator(m));
    }
    Real base = t.baseline ? t.baseline->test_metric : INFINITY;
    Real synth = t.solved ? t.best.test_metric : INFINITY;
    bool ok = synth < base && aggregator;
    good += ok;
    detail += Format(" s%d=%.3f vs %.3f%s", seed, synth, base, aggregator ? "+agg" : "");
  }
  return {good >= kTransferSeedsNeeded,
          Format("%d/%d seeds beat the baseline with a reused lib.* aggregator (fraction 0.1):",
                 good, kSeeds) +
              detail};
}

Outcome KernelReuse() {
  int good = 0;
  std::string detail;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    const Run& run = Sequence("gs2", seed);
    const TaskOutcome& t = run.report.tasks.at(2);
    Real reused = INFINITY, scratch = INFINITY;
    for (const TrainedCandidate& c : t.ranked) {
      const Term* k = Kernel(*c.program);
      if (k == nullptr || k->kind() != Term::Kind::kLibRef || c.diverged) continue;
      Real& slot = k->fresh() ? scratch : reused;
      slot = std::min(slot, c.test_metric);
    }
    bool ok = std::isfinite(reused) && std::isfinite(scratch) && reused <= kKernelRatio * scratch;
    good += ok;
    detail += Format(" s%d=%.2f/%.2f", seed, reused, scratch);
  }
  return {good >= kKernelSeedsNeeded,
          Format("%d/%d seeds with reused-kernel RMSE <= %.1fx from-scratch (reused/scratch):", good,
                 kSeeds, kKernelRatio) +
              detail};
}

Outcome NoForgetting() {
  // Sequences already run by earlier criteria, or one fresh CS2 run.
  std::vector<const Run*> runs;
  for (const char* config : {"cs1", "cs2", "gs2"}) {
    for (int seed = 1; seed <= kSeeds; ++seed) {
      fs::path dir = Scratch() / (std::string(config) + "_seed" + std::to_string(seed));
      if (fs::exists(dir)) runs.push_back(&Sequence(config, seed));
    }
  }
  if (runs.empty()) runs.push_back(&Sequence("cs2", 1));

  int checked = 0, snapshots = 0;
  for (const Run* run : runs) {
    for (const ForgettingCheck& c : CheckForgetting(run->spec, run->report)) {
      ++checked;
      if (!c.metric_identical || !c.checkpoints_identical) {
        return {false, Format("%s seed %llu task %d: recorded %.17g re-evaluated %.17g%s",
                              run->spec.name.c_str(), static_cast<unsigned long long>(run->spec.seed),
                              c.task, c.recorded, c.reevaluated,
                              c.checkpoints_identical ? "" : ", checkpoint bytes changed")};
      }
    }
    // Every checkpoint file of snapshot k is unchanged in every later one.
    const std::size_t n = run->report.tasks.size();
    std::map<std::string, std::string> last = Tree(run->dir / ("library_" + std::to_string(n)));
    for (std::size_t k = 1; k < n; ++k) {
      for (const auto& [path, bytes] : Tree(run->dir / ("library_" + std::to_string(k)))) {
        if (path.rfind("checkpoints", 0) != 0) continue;
        ++snapshots;
        auto it = last.find(path);
        if (it == last.end() || it->second != bytes) {
          return {false, "checkpoint " + path + " differs between library_" + std::to_string(k) +
                             " and library_" + std::to_string(n)};
        }
      }
    }
  }
  return {checked > 0, Format("%d best programs re-evaluated bit-exactly over %zu runs; %d "
                              "checkpoint files byte-identical in later snapshots",
                              checked, runs.size(), snapshots)};
}

Outcome Determinism() {
  const std::string cli = NEUROSYN_CLI_PATH;
  const fs::path dir = Scratch() / "determinism";
  fs::remove_all(dir);
  const std::string seq = SourcePath("configs/smoke.json");
  auto runseq = [&](const std::string& name, int jobs) {
    return Shell(cli + " runseq --sequence " + seq + " --seed 5 --jobs " + std::to_string(jobs) +
                 " --out " + (dir / name).string());
  };
  if (runseq("a_jobs1", 1) != 0 || runseq("b_jobs1", 1) != 0 || runseq("c_jobs4", 4) != 0) {
    return {false, "runseq failed"};
  }
  int compared = 0;
  for (const char* other : {"b_jobs1", "c_jobs4"}) {
    auto a = Tree(dir / "a_jobs1");
    auto b = Tree(dir / other);
    if (a.size() != b.size()) return {false, std::string("file sets differ vs ") + other};
    for (const auto& [path, bytes] : a) {
      ++compared;
      if (b[path] != bytes) return {false, path + " differs vs " + other};
    }
  }
  const std::string data = (dir / "data").string();
  if (Shell(cli + " gen --task count --class 4 --n 200 --seed 3 --out " + data) != 0) {
    return {false, "gen failed"};
  }
  auto synth = [&](const std::string& name, int jobs) {
    return Shell(cli + " synth --task " + data + " --budget 4 --epochs 2 --seed 9 --jobs " +
                 std::to_string(jobs) + " --out " + (dir / name).string());
  };
  if (synth("s1", 1) != 0 || synth("s4", 4) != 0) return {false, "synth failed"};
  bool synth_same = Slurp(dir / "s1" / "synth.json") == Slurp(dir / "s4" / "synth.json");
  return {synth_same, Format("runseq: %d files byte-identical across a rerun and --jobs 1 vs 4; "
                             "synth.json %s across --jobs 1 vs 4",
                             compared, synth_same ? "identical" : "DIFFERS")};
}

}  // namespace neurosyn::acceptance

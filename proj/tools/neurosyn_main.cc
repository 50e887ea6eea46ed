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

// neurosyn: dataset generation, census, synthesis, task sequences and
// gradient checks.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or config error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "neurosyn/autodiff.h"
#include "neurosyn/census_config.h"
#include "neurosyn/evolve.h"
#include "neurosyn/lifelong.h"
#include "neurosyn/seed.h"
#include "neurosyn/syntax.h"
#include "neurosyn/taskgen.h"
#include "neurosyn/topdown.h"
#include "neurosyn/verify.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace neurosyn {
namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 1;
  bool seed_set = false;
  int jobs = 1;
  std::string out;
  bool json = false;
};

fs::path OutDir(const Globals& g) {
  if (!g.out.empty()) return g.out;
  if (const char* env = std::getenv("NEUROSYN_OUT"); env != nullptr && *env != '\0') return env;
  return "neurosyn_out";
}

void WriteJson(const fs::path& path, const json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json ReadJsonFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// gen ------------------------------------------------------------------------

struct GenArgs {
  std::string task;
  std::string style = "glyph";
  int digit = 0;
  int n = 1000;
  double fraction = 1;
};

std::string CanonicalGenerator(const std::string& name, const std::string& style) {
  static const std::map<std::string, std::string> aliases = {
      {"recognize", "recognize_glyph"}, {"classify", "classify_glyph"},
      {"count", "count_glyph"},         {"sum", "sum_glyph"},
  };
  if (auto it = aliases.find(name); it != aliases.end()) return it->second;
  if (name == "regress" || name == "shortest_path") {
    if (style != "glyph" && style != "color") throw UsageError("--style must be glyph or color");
    return name + "_" + style;
  }
  return name;
}

int RunGen(const GenArgs& args, const Globals& g) {
  SequenceTask t;
  t.generator = CanonicalGenerator(args.task, args.style);
  t.digit = args.digit;
  t.n = args.n;
  t.fraction = args.fraction;
  // Same validation as sequence entries (generator name, class, n, fraction).
  json entry = {{"task", t.generator}, {"class", t.digit}, {"n", t.n}, {"fraction", t.fraction}};
  try {
    ParseSequence(json::array({entry}));
  } catch (const SequenceError& e) {
    throw UsageError(e.what());
  }
  Task task = MakeSequenceTask(t, g.seed);
  fs::path dir = OutDir(g);
  WriteDataset(task, dir);
  json summary = {{"schema", "neurosyn.gen/1"},
                  {"task", task.name},
                  {"type", task.type.ToString()},
                  {"seed", g.seed},
                  {"train", task.train.size()},
                  {"val", task.val.size()},
                  {"test", task.test.size()},
                  {"dir", dir.string()}};
  if (g.json) {
    std::cout << summary.dump(2) << '\n';
  } else {
    std::printf("%s %s train=%d val=%d test=%d -> %s\n", task.name.c_str(),
                task.type.ToString().c_str(), task.train.size(), task.val.size(),
                task.test.size(), dir.string().c_str());
  }
  return kOk;
}

// census ---------------------------------------------------------------------

struct CensusArgs {
  std::string config;
  std::string type;
  std::string library;
  int min_size = 1;
  int max_size = 6;
  bool typed_only = false;
  bool untyped_only = false;
};

int RunCensus(const CensusArgs& args, const Globals& g) {
  CensusConfig config;
  try {
    if (!args.config.empty()) config = ParseCensusConfig(ReadJsonFile(args.config));
    if (!args.type.empty()) config.type = ParseType(args.type);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!config.type) throw UsageError("census needs a target type (--type or config \"type\")");
  if (args.min_size < 1 || args.max_size < args.min_size) throw UsageError("bad size range");

  Library library = BuildCensusLibrary(config);
  if (!args.library.empty()) {
    Library extra = Library::Read(args.library);
    library.AddFrozen(extra.modules());
  }
  if (args.config.empty()) {
    config.universe.tensors.clear();
    config.universe.adts.clear();
    AddToUniverse(*config.type, config.universe);
    for (const ModulePtr& m : library.modules()) AddToUniverse(m->signature(), config.universe);
  }
  Grammar grammar(library, EnumerateUniverse(config.universe), config.grammar);

  json rows = json::array();
  for (int s = args.min_size; s <= args.max_size; ++s) {
    json row = {{"size", s}};
    std::string line = "size=" + std::to_string(s);
    if (!args.untyped_only) {
      std::uint64_t n = CensusTyped(*config.type, grammar, s);
      row["typed"] = n;
      line += " typed=" + std::to_string(n);
    }
    if (!args.typed_only) {
      std::uint64_t n = CensusUntyped(grammar, s);
      row["untyped"] = n;
      line += " untyped=" + std::to_string(n);
    }
    rows.push_back(row);
    if (!g.json) std::printf("%s\n", line.c_str());
  }
  if (g.json) {
    json out = {{"schema", "neurosyn.census/1"}, {"type", config.type->ToString()}, {"rows", rows}};
    std::cout << out.dump(2) << '\n';
  }
  return kOk;
}

// synth ----------------------------------------------------------------------

struct SynthArgs {
  std::string task;
  std::string strategy = "topdown";
  std::optional<int> budget;
  std::string config;
  std::string library;
  std::optional<int> max_size;
  std::optional<int> epochs;
  std::optional<double> lr;
  std::string sketch;
};

int RunSynth(const SynthArgs& args, const Globals& g) {
  Strategy strategy;
  SequenceSpec settings;
  try {
    strategy = ParseStrategy(args.strategy);
    if (!args.config.empty()) settings = ParseSequence(ReadJsonFile(args.config), false);
    else settings.universe.tensors.clear();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const SequenceError& e) {
    throw UsageError(e.what());
  }
  if (!fs::exists(fs::path(args.task) / "manifest.json")) {
    throw UsageError("--task must name a dataset directory written by 'neurosyn gen'");
  }
  Task task = ReadDataset(args.task);
  Library library;
  if (!args.library.empty()) library = Library::Read(args.library);

  if (settings.universe.tensors.empty()) {
    settings.universe.adts.clear();
    AddToUniverse(task.type, settings.universe);
    for (const ModulePtr& m : library.modules()) AddToUniverse(m->signature(), settings.universe);
  }
  if (args.max_size) settings.max_size = *args.max_size;
  if (args.epochs) settings.train.epochs = *args.epochs;
  if (args.lr) settings.train.lr = *args.lr;
  if (settings.max_size < 1 || settings.train.epochs < 0 || settings.train.lr <= 0) {
    throw UsageError("bad --max-size, --epochs or --lr");
  }
  if (args.budget && *args.budget < 1) throw UsageError("--budget must be >= 1");
  settings.train.seed = DeriveSeed(g.seed, 1);

  TermPtr sketch;
  if (!args.sketch.empty()) {
    try {
      sketch = ParseProgram(args.sketch, library.Resolver());
    } catch (const std::exception& e) {
      throw UsageError(std::string("bad --sketch: ") + e.what());
    }
  }

  Grammar grammar(library, EnumerateUniverse(settings.universe), settings.grammar);
  auto start = std::chrono::steady_clock::now();
  SynthesisResult result;
  try {
    if (strategy == Strategy::kTopDown) {
      SearchConfig search;
      search.grammar = settings.grammar;
      search.max_size = settings.max_size;
      search.max_candidates = args.budget.value_or(settings.max_candidates);
      search.sketch = sketch;
      result = SynthesizeTopDown(task, grammar, search, settings.train, "nn", g.jobs);
    } else {
      EvolveConfig evolve = settings.evolve;
      evolve.max_size = settings.max_size;
      if (args.budget) evolve.population = *args.budget;
      evolve.seed = DeriveSeed(g.seed, 2);
      evolve.sketch = sketch;
      result = Evolve(task, grammar, evolve, settings.train, "nn", g.jobs);
    }
  } catch (const SynthesisError& e) {
    std::fprintf(stderr, "neurosyn: %s\n", e.what());
    return kVerifyFailed;
  }
  double seconds = Seconds(start);

  json out = SynthesisJson(result);
  out["schema"] = "neurosyn.synth/1";
  out["task"] = task.name;
  out["type"] = task.type.ToString();
  out["seed"] = g.seed;
  fs::path dir = OutDir(g);
  WriteJson(dir / "synth.json", out);
  if (g.json) {
    std::cout << out.dump(2) << '\n';
  } else {
    for (std::size_t i = 0; i < result.candidates.size(); ++i) {
      const TrainedCandidate& c = result.candidates[i];
      std::printf("%2zu val_loss=%.6g test_%s=%.6g size=%d %s\n", i + 1, c.val_loss,
                  ToString(c.metric), c.test_metric, c.size, PrintProgram(*c.program).c_str());
    }
    std::printf("%s: %zu candidates in %.1fs -> %s\n", ToString(strategy),
                result.candidates.size(), seconds, (dir / "synth.json").string().c_str());
  }
  return result.solved() ? kOk : kVerifyFailed;
}

// runseq ---------------------------------------------------------------------

struct RunseqArgs {
  std::string sequence;
  std::string strategy = "topdown";
  std::string library;
};

int RunRunseq(const RunseqArgs& args, const Globals& g) {
  SequenceSpec spec;
  RunOptions options;
  try {
    spec = ReadSequence(args.sequence);
    options.strategy = ParseStrategy(args.strategy);
  } catch (const SequenceError& e) {
    throw UsageError(e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (g.seed_set) spec.seed = g.seed;
  if (!args.library.empty()) options.library = Library::Read(args.library);
  fs::path dir = OutDir(g);
  fs::create_directories(dir);
  options.jobs = g.jobs;
  options.out_dir = dir;

  SequenceReport report = RunSequence(spec, options);
  std::vector<ForgettingCheck> checks = CheckForgetting(spec, report);
  json report_json = ReportJson(report);
  json forgetting = ForgettingJson(checks);
  WriteJson(dir / "report.json", report_json);
  WriteJson(dir / "transfer.json", TransferJson(report));
  WriteJson(dir / "forgetting.json", forgetting);

  bool ok = forgetting.at("ok").get<bool>();
  if (g.json) {
    std::cout << report_json.dump(2) << '\n';
  } else {
    for (const TaskOutcome& t : report.tasks) {
      std::printf("task %d %s: ", t.index, t.task_name.c_str());
      if (!t.solved) {
        std::printf("no solution (%.1fs)\n", t.seconds);
        continue;
      }
      std::printf("test_%s=%.6g", ToString(t.best.metric), t.best.test_metric);
      if (t.baseline) std::printf(" baseline=%.6g", t.baseline->test_metric);
      std::printf(" library %zu->%zu (%.1fs)\n  %s\n", t.library_before, t.library_after,
                  t.seconds, PrintProgram(*t.best.program).c_str());
    }
    std::printf("forgetting check: %s -> %s\n", ok ? "ok" : "FAILED", dir.string().c_str());
  }
  return ok ? kOk : kVerifyFailed;
}

// gradcheck ------------------------------------------------------------------

struct GradcheckArgs {
  int programs = 5;
  bool inject_sign_flip = false;
};

int RunGradcheck(const GradcheckArgs& args, const Globals& g) {
  if (args.programs < 0) throw UsageError("--programs must be >= 0");
  SetSignFlipBugForTesting(args.inject_sign_flip);
  std::vector<GradcheckRow> rows = TemplateGradchecks(g.seed);
  std::vector<GradcheckRow> programs = ProgramGradchecks(g.seed, args.programs);
  rows.insert(rows.end(), programs.begin(), programs.end());
  SetSignFlipBugForTesting(false);
  bool ok = AllPassed(rows);
  if (g.json) {
    std::cout << GradcheckJson(rows).dump(2) << '\n';
  } else {
    for (const GradcheckRow& r : rows) {
      std::printf("%s %s max_rel_error=%.3g\n", r.result.passed ? "PASS" : "FAIL",
                  r.subject.c_str(), r.result.max_rel_error);
    }
  }
  return ok ? kOk : kVerifyFailed;
}

int Main(int argc, char** argv) {
  CLI::App app{"neurosyn: typed neural program synthesis"};
  app.require_subcommand(1);
  Globals g;
  auto add_globals = [&](CLI::App* sub) {
    sub->add_option("--seed", g.seed, "Master seed")->each([&](const std::string&) {
      g.seed_set = true;
    });
    sub->add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", g.out, "Output directory (default $NEUROSYN_OUT or neurosyn_out)");
    sub->add_flag("--json", g.json, "Print JSON to stdout");
  };

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a dataset");
  add_globals(gen_cmd);
  gen_cmd->add_option("--task", gen.task, "Generator (recognize, classify, count, sum, regress, "
                                          "shortest_path or a full generator name)")
      ->required();
  gen_cmd->add_option("--style", gen.style, "glyph or color (regress, shortest_path)");
  gen_cmd->add_option("--class", gen.digit, "Digit class 0..9");
  gen_cmd->add_option("--n", gen.n, "Nominal dataset size");
  gen_cmd->add_option("--fraction", gen.fraction, "Fraction of train/val data kept");

  CensusArgs census;
  CLI::App* census_cmd = app.add_subcommand("census", "Count typed and untyped programs by size");
  add_globals(census_cmd);
  census_cmd->add_option("--config", census.config, "Census configuration JSON");
  census_cmd->add_option("--type", census.type, "Target type (overrides the config)");
  census_cmd->add_option("--library", census.library, "Library directory to add");
  census_cmd->add_option("--min-size", census.min_size);
  census_cmd->add_option("--max-size", census.max_size);
  auto* typed = census_cmd->add_flag("--typed", census.typed_only, "Typed counts only");
  census_cmd->add_flag("--untyped", census.untyped_only, "Untyped counts only")->excludes(typed);

  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Synthesize a program for one dataset");
  add_globals(synth_cmd);
  synth_cmd->add_option("--task", synth.task, "Dataset directory")->required();
  synth_cmd->add_option("--strategy", synth.strategy, "topdown or evolve");
  synth_cmd->add_option("--budget", synth.budget,
                        "Candidates trained (topdown) or population size (evolve)");
  synth_cmd->add_option("--config", synth.config, "Settings JSON (sequence format, no tasks)");
  synth_cmd->add_option("--library", synth.library, "Library directory");
  synth_cmd->add_option("--max-size", synth.max_size);
  synth_cmd->add_option("--epochs", synth.epochs);
  synth_cmd->add_option("--lr", synth.lr);
  synth_cmd->add_option("--sketch", synth.sketch, "Partial program with hole<type> slots");

  RunseqArgs runseq;
  CLI::App* runseq_cmd = app.add_subcommand("runseq", "Run a task sequence");
  add_globals(runseq_cmd);
  runseq_cmd->add_option("--sequence", runseq.sequence, "Sequence JSON")->required();
  runseq_cmd->add_option("--strategy", runseq.strategy, "topdown or evolve");
  runseq_cmd->add_option("--library", runseq.library, "Starting library directory");

  GradcheckArgs gradcheck;
  CLI::App* gradcheck_cmd = app.add_subcommand("gradcheck", "Finite-difference gradient checks");
  add_globals(gradcheck_cmd);
  gradcheck_cmd->add_option("--programs", gradcheck.programs, "Random programs to check");
  gradcheck_cmd->add_flag("--inject-sign-flip", gradcheck.inject_sign_flip,
                          "Flip one backward rule (negative control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (gen_cmd->parsed()) return RunGen(gen, g);
    if (census_cmd->parsed()) return RunCensus(census, g);
    if (synth_cmd->parsed()) return RunSynth(synth, g);
    if (runseq_cmd->parsed()) return RunRunseq(runseq, g);
    if (gradcheck_cmd->parsed()) return RunGradcheck(gradcheck, g);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "neurosyn: %s\n", e.what());
    return kUsage;
  } catch (const SequenceError& e) {
    std::fprintf(stderr, "neurosyn: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "neurosyn: error: %s\n", e.what());
    return kVerifyFailed;
  }
  return kUsage;
}

}  // namespace
}  // namespace neurosyn

int main(int argc, char** argv) { return neurosyn::Main(argc, argv); }

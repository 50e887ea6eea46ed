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

#include "neurosyn/lifelong.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <chrono>
#include <fstream>
#include <map>
#include <set>

#include "neurosyn/seed.h"
#include "neurosyn/syntax.h"

namespace neurosyn {

namespace {

using nlohmann::json;

constexpr std::size_t kReportedCandidates = 3;

struct GeneratorInfo {
  const char* type;
  bool needs_digit;
};

const std::map<std::string, GeneratorInfo>& Generators() {
  static const std::map<std::string, GeneratorInfo> g = {
      {"recognize_glyph", {"real[8][8] -> bool[1]", true}},
      {"classify_glyph", {"real[8][8] -> real[10]", false}},
      {"count_glyph", {"list<real[8][8]> -> real[1]", true}},
      {"sum_glyph", {"list<real[8][8]> -> real[1]", false}},
      {"regress_glyph", {"real[2][8][8] -> real[2]", false}},
      {"regress_color", {"real[4][12][12] -> real[2]", false}},
      {"shortest_path_glyph", {"graph<real[2][8][8]> -> graph<real[1]>", false}},
      {"shortest_path_color", {"graph<real[4][12][12]> -> graph<real[1]>", false}},
  };
  return g;
}

void CheckKeys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw SequenceError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw SequenceError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void Read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

AdtKind ParseAdt(const std::string& s) {
  if (s == "list") return AdtKind::kList;
  if (s == "graph") return AdtKind::kGraph;
  throw SequenceError("unknown ADT '" + s + "'");
}

SequenceTask ParseTask(const json& j, int index) {
  const std::string where = "task " + std::to_string(index + 1);
  CheckKeys(j, {"task", "class", "n", "fraction", "baseline", "sketch", "max_candidates", "epochs"},
            where);
  SequenceTask t;
  if (!j.contains("task")) throw SequenceError(where + " has no \"task\"");
  t.generator = j.at("task").get<std::string>();
  auto it = Generators().find(t.generator);
  if (it == Generators().end()) {
    throw SequenceError(where + ": unknown task generator '" + t.generator + "'");
  }
  if (it->second.needs_digit && !j.contains("class")) {
    throw SequenceError(where + ": " + t.generator + " needs a \"class\"");
  }
  Read(j, "class", t.digit);
  Read(j, "n", t.n);
  Read(j, "fraction", t.fraction);
  Read(j, "baseline", t.baseline);
  Read(j, "sketch", t.sketch);
  if (j.contains("max_candidates")) t.max_candidates = j.at("max_candidates").get<int>();
  if (j.contains("epochs")) t.epochs = j.at("epochs").get<int>();
  if (t.digit < 0 || t.digit > 9) {
    throw SequenceError(where + ": class " + std::to_string(t.digit) + " is outside 0..9");
  }
  if (t.n < 20) throw SequenceError(where + ": n must be >= 20");
  if (!(t.fraction > 0 && t.fraction <= 1)) throw SequenceError(where + ": fraction must be in (0, 1]");
  if (t.max_candidates && *t.max_candidates < 1) {
    throw SequenceError(where + ": max_candidates must be >= 1");
  }
  if (t.epochs && *t.epochs < 1) throw SequenceError(where + ": epochs must be >= 1");
  return t;
}

void ParseTrain(const json& j, TrainConfig& t) {
  CheckKeys(j, {"lr", "batch", "epochs", "optimizer", "conv_radius", "max_degree", "eval_batch",
                "hyper"},
            "train");
  Read(j, "lr", t.lr);
  Read(j, "batch", t.batch);
  Read(j, "epochs", t.epochs);
  Read(j, "eval_batch", t.eval_batch);
  Read(j, "conv_radius", t.eval.conv_radius);
  Read(j, "max_degree", t.eval.max_degree);
  if (j.contains("optimizer")) {
    std::string o = j.at("optimizer").get<std::string>();
    if (o == "adam") {
      t.optimizer = TrainConfig::Optim::kAdam;
    } else if (o == "sgd") {
      t.optimizer = TrainConfig::Optim::kSgd;
    } else {
      throw SequenceError("unknown optimizer '" + o + "'");
    }
  }
  if (j.contains("hyper")) {
    const json& h = j.at("hyper");
    CheckKeys(h, {"mlp_hidden", "cnn_channels", "cnn_kernel", "lstm_hidden", "regularizers",
                  "dropout"},
              "train.hyper");
    Read(h, "mlp_hidden", t.hyper.mlp_hidden);
    Read(h, "cnn_channels", t.hyper.cnn_channels);
    Read(h, "cnn_kernel", t.hyper.cnn_kernel);
    Read(h, "lstm_hidden", t.hyper.lstm_hidden);
    Read(h, "regularizers", t.hyper.regularizers);
    Read(h, "dropout", t.hyper.dropout);
  }
  if (!(t.lr > 0) || t.batch < 1 || t.epochs < 0 || t.eval_batch < 1) {
    throw SequenceError("train: lr, batch and eval_batch must be positive, epochs >= 0");
  }
}

void ParseEvolve(const json& j, EvolveConfig& e) {
  CheckKeys(j, {"population", "generations", "p_crossover", "p_mutation", "max_growth",
                "max_size"},
            "evolve");
  Read(j, "population", e.population);
  Read(j, "generations", e.generations);
  Read(j, "p_crossover", e.p_crossover);
  Read(j, "p_mutation", e.p_mutation);
  Read(j, "max_growth", e.max_growth);
  Read(j, "max_size", e.max_size);
  if (e.population < 2 || e.generations < 0 || e.max_size < 1) {
    throw SequenceError("evolve: population >= 2, generations >= 0, max_size >= 1 required");
  }
}

std::string Lower(std::string s) {
  for (char& c : s) {
    c = std::isalnum(static_cast<unsigned char>(c))
            ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
            : '_';
  }
  return s;
}

json Number(Real v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

void CollectTensors(const Type& t, std::vector<TensorType>& tensors, std::vector<AdtKind>& adts) {
  if (t.is_function()) {
    CollectTensors(t.input(), tensors, adts);
    CollectTensors(t.output(), tensors, adts);
    return;
  }
  if (t.is_adt() && std::find(adts.begin(), adts.end(), t.adt()) == adts.end()) {
    adts.push_back(t.adt());
  }
  if (std::find(tensors.begin(), tensors.end(), t.tensor()) == tensors.end()) {
    tensors.push_back(t.tensor());
  }
}

}  // namespace

void AddToUniverse(const Type& type, UniverseConfig& universe) {
  CollectTensors(type, universe.tensors, universe.adts);
}

Type SequenceTaskType(const SequenceTask& task) {
  auto it = Generators().find(task.generator);
  if (it == Generators().end()) throw SequenceError("unknown task generator '" + task.generator + "'");
  return ParseType(it->second.type);
}

Task MakeSequenceTask(const SequenceTask& t, std::uint64_t seed) {
  TaskSize size{t.n, t.fraction};
  const std::string& g = t.generator;
  if (g == "recognize_glyph") return MakeRecognizeTask(t.digit, size, seed);
  if (g == "classify_glyph") return MakeClassifyTask(size, seed);
  if (g == "count_glyph") return MakeCountTask(t.digit, size, seed);
  if (g == "sum_glyph") return MakeSumTask(size, seed);
  if (g == "regress_glyph") return MakeNodeRegressTask(GridStyle::kGlyph, size, seed);
  if (g == "regress_color") return MakeNodeRegressTask(GridStyle::kColor, size, seed);
  if (g == "shortest_path_glyph") return MakeShortestPathTask(GridStyle::kGlyph, size, seed);
  if (g == "shortest_path_color") return MakeShortestPathTask(GridStyle::kColor, size, seed);
  throw SequenceError("unknown task generator '" + g + "'");
}

SequenceSpec ParseSequence(const json& j, bool require_tasks) {
  SequenceSpec spec;
  try {
    const json* tasks = &j;
    bool has_universe = false;
    if (j.is_object()) {
      CheckKeys(j, {"schema", "name", "seed", "universe", "grammar", "train", "evolve", "tasks"},
                "sequence");
      if (j.contains("schema") && j.at("schema") != "neurosyn.sequence/1") {
        throw SequenceError("unsupported sequence schema " + j.at("schema").dump());
      }
      Read(j, "name", spec.name);
      Read(j, "seed", spec.seed);
      if (j.contains("universe")) {
        const json& u = j.at("universe");
        CheckKeys(u, {"tensors", "adts", "max_function_depth"}, "universe");
        has_universe = true;
        spec.universe.tensors.clear();
        for (const json& t : u.at("tensors")) {
          Type ty = ParseType(t.get<std::string>());
          if (!ty.is_tensor()) throw SequenceError("universe tensor " + t.dump() + " is not a tensor");
          spec.universe.tensors.push_back(ty.tensor());
        }
        if (u.contains("adts")) {
          spec.universe.adts.clear();
          for (const json& a : u.at("adts")) spec.universe.adts.push_back(ParseAdt(a.get<std::string>()));
        }
        Read(u, "max_function_depth", spec.universe.max_function_depth);
      }
      if (j.contains("grammar")) {
        const json& g = j.at("grammar");
        CheckKeys(g, {"conv_repeats", "max_size", "max_candidates", "fresh_modules", "zeros"},
                  "grammar");
        Read(g, "conv_repeats", spec.grammar.conv_repeats);
        Read(g, "max_size", spec.max_size);
        Read(g, "max_candidates", spec.max_candidates);
        Read(g, "fresh_modules", spec.grammar.fresh_modules);
        Read(g, "zeros", spec.grammar.zeros);
        for (int n : spec.grammar.conv_repeats) {
          if (n < 1) throw SequenceError("grammar: conv exponents must be >= 1");
        }
        if (spec.max_size < 1 || spec.max_candidates < 1) {
          throw SequenceError("grammar: max_size and max_candidates must be >= 1");
        }
      }
      if (j.contains("train")) ParseTrain(j.at("train"), spec.train);
      if (j.contains("evolve")) ParseEvolve(j.at("evolve"), spec.evolve);
      if (!j.contains("tasks")) {
        if (require_tasks) throw SequenceError("sequence has no \"tasks\"");
        if (!has_universe) spec.universe.tensors.clear();
        return spec;
      }
      tasks = &j.at("tasks");
    }
    if (!tasks->is_array() || tasks->empty()) {
      throw SequenceError("tasks must be a non-empty array");
    }
    for (std::size_t i = 0; i < tasks->size(); ++i) {
      spec.tasks.push_back(ParseTask((*tasks)[i], static_cast<int>(i)));
    }
    if (!has_universe) {
      spec.universe.tensors.clear();
      spec.universe.adts.clear();
      for (const SequenceTask& t : spec.tasks) {
        CollectTensors(SequenceTaskType(t), spec.universe.tensors, spec.universe.adts);
      }
    }
    TypeUniverse universe(spec.universe);
    for (std::size_t i = 0; i < spec.tasks.size(); ++i) {
      Type t = SequenceTaskType(spec.tasks[i]);
      if (!universe.Contains(t)) {
        throw SequenceError("task " + std::to_string(i + 1) + " type " + t.ToString() +
                            " is outside the universe");
      }
    }
  } catch (const json::exception& e) {
    throw SequenceError(std::string("malformed sequence: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SequenceError(std::string("invalid sequence: ") + e.what());
  }
  return spec;
}

SequenceSpec ReadSequence(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SequenceError("cannot open sequence file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw SequenceError("malformed sequence file " + path.string() + ": " + e.what());
  }
  return ParseSequence(j);
}

json SequenceSpecJson(const SequenceSpec& spec) {
  json tensors = json::array(), adts = json::array();
  for (const TensorType& t : spec.universe.tensors) tensors.push_back(ToString(t));
  for (AdtKind a : spec.universe.adts) adts.push_back(AdtPrefix(a));
  json tasks = json::array();
  for (const SequenceTask& t : spec.tasks) {
    json e = {{"task", t.generator}, {"class", t.digit}, {"n", t.n}, {"fraction", t.fraction},
              {"baseline", t.baseline}};
    if (!t.sketch.empty()) e["sketch"] = t.sketch;
    if (t.max_candidates) e["max_candidates"] = *t.max_candidates;
    if (t.epochs) e["epochs"] = *t.epochs;
    tasks.push_back(std::move(e));
  }
  return {{"schema", "neurosyn.sequence/1"},
          {"name", spec.name},
          {"seed", spec.seed},
          {"universe",
           {{"tensors", tensors},
            {"adts", adts},
            {"max_function_depth", spec.universe.max_function_depth}}},
          {"grammar",
           {{"conv_repeats", spec.grammar.conv_repeats},
            {"max_size", spec.max_size},
            {"max_candidates", spec.max_candidates},
            {"fresh_modules", spec.grammar.fresh_modules},
            {"zeros", spec.grammar.zeros}}},
          {"train",
           {{"lr", spec.train.lr},
            {"batch", spec.train.batch},
            {"epochs", spec.train.epochs},
            {"optimizer", spec.train.optimizer == TrainConfig::Optim::kAdam ? "adam" : "sgd"},
            {"conv_radius", spec.train.eval.conv_radius},
            {"max_degree", spec.train.eval.max_degree},
            {"eval_batch", spec.train.eval_batch},
            {"hyper", HyperToJson(spec.train.hyper)}}},
          {"evolve",
           {{"population", spec.evolve.population},
            {"generations", spec.evolve.generations},
            {"p_crossover", spec.evolve.p_crossover},
            {"p_mutation", spec.evolve.p_mutation},
            {"max_growth", spec.evolve.max_growth},
            {"max_size", spec.evolve.max_size}}},
          {"tasks", tasks}};
}

Strategy ParseStrategy(const std::string& text) {
  if (text == "topdown") return Strategy::kTopDown;
  if (text == "evolve") return Strategy::kEvolve;
  throw std::invalid_argument("unknown strategy '" + text + "' (topdown or evolve)");
}

const char* ToString(Strategy s) { return s == Strategy::kTopDown ? "topdown" : "evolve"; }

Task LinearizeGrid(const Task& task) {
  auto as_list = [](const Value& v) { return Value::OfList(v.data, v.offsets); };
  Task t = task;
  t.name = task.name + "_linear";
  t.type = Type::Function(Type::List(task.type.input().tensor()),
                          Type::List(task.type.output().tensor()));
  for (Split* s : {&t.train, &t.val, &t.test}) {
    s->x = as_list(s->x);
    s->y = as_list(s->y);
  }
  return t;
}

TermPtr BaselineProgram(const Task& task) {
  const Type& in = task.type.input();
  const Type& out = task.type.output();
  if (!in.is_adt()) {
    throw SequenceError("standalone baseline needs a list or graph task, got " +
                        task.type.ToString());
  }
  const TensorType feature{Atom::kReal, {16}};
  const Type elem = Type::Tensor(in.tensor());
  const Type feat = Type::Tensor(feature);
  TermPtr perceive = Term::Map(
      AdtKind::kList,
      Term::Compose(Term::LibRef("nn_base_2", Type::Function(feat, feat), true),
                    Term::LibRef("nn_base_3", Type::Function(elem, feat), true)));
  if (in.adt() == AdtKind::kList && out.is_tensor()) {
    return Term::Compose(Term::LibRef("nn_base_1", Type::Function(Type::List(feature), out), true),
                         perceive);
  }
  if (in.adt() == AdtKind::kGraph && out.is_adt() && out.adt() == AdtKind::kGraph) {
    Type kernel = Type::Function(Type::List(feature), Type::Tensor(out.tensor()));
    return Term::Compose(
        Term::Conv(AdtKind::kList, Term::LibRef("nn_base_1", kernel, true), 1), perceive);
  }
  throw SequenceError("unsupported task shape for the standalone baseline: " +
                      task.type.ToString());
}

TrainedCandidate StandaloneBaseline(const Task& task, const TrainConfig& config) {
  TermPtr program = BaselineProgram(task);
  if (task.type.input().is_adt() && task.type.input().adt() == AdtKind::kGraph) {
    TrainConfig c = config;
    // Every node's window spans the whole linearized grid.
    c.eval.conv_radius = kMaxGridSide * kMaxGridSide - 1;
    return Train(program, LinearizeGrid(task), Library{}, c);
  }
  return Train(program, task, Library{}, config);
}

std::vector<std::string> ReusedModules(const Term& program) {
  std::vector<std::string> out;
  for (const std::string& name : ReferencedNames(program)) {
    if (name.rfind(kLibraryPrefix, 0) == 0 && std::find(out.begin(), out.end(), name) == out.end()) {
      out.push_back(name);
    }
  }
  return out;
}

std::pair<bool, bool> TransferFlags(const Term& program, const Library& library) {
  bool high = false, low = false;
  for (const std::string& name : ReusedModules(program)) {
    ModulePtr m = library.Find(name);
    if (!m) continue;
    const Type& sig = m->signature();
    if (sig.input().is_adt() || sig.output().is_function()) {
      high = true;
    } else {
      low = true;
    }
  }
  return {high, low};
}

TermPtr FrozenForm(const Term& program) {
  if (program.kind() == Term::Kind::kLibRef && program.fresh()) {
    return Renamed(program, std::string(kLibraryPrefix) + program.name(), false);
  }
  std::vector<TermPtr> children;
  for (const TermPtr& c : program.children()) children.push_back(FrozenForm(*c));
  return WithChildren(program, std::move(children));
}

SequenceReport RunSequence(const SequenceSpec& spec, const RunOptions& options) {
  SequenceReport report;
  report.name = spec.name;
  report.strategy = options.strategy;
  report.seed = spec.seed;
  report.library = options.library;
  Library& lib = report.library;
  const TypeUniverse universe(spec.universe);
  const std::string stem = "nn_" + Lower(spec.name) + "_";

  for (std::size_t i = 0; i < spec.tasks.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    const SequenceTask& st = spec.tasks[i];
    const std::uint64_t k = i + 1;
    Task task = MakeSequenceTask(st, DeriveSeed(spec.seed, k));
    TaskOutcome out;
    out.index = static_cast<int>(k);
    out.spec = st;
    out.task_name = task.name;
    out.type = task.type;
    out.library_before = lib.size();

    TrainConfig train = spec.train;
    train.seed = DeriveSeed(spec.seed, 1000 + k);
    if (st.epochs) train.epochs = *st.epochs;
    Grammar grammar(lib, universe, spec.grammar);
    TermPtr sketch;
    if (!st.sketch.empty()) {
      try {
        sketch = ParseProgram(st.sketch, lib.Resolver());
      } catch (const std::exception& e) {
        throw SequenceError("task " + std::to_string(k) + " sketch: " + e.what());
      }
    }
    const std::string prefix = stem + std::to_string(k);
    SynthesisResult result;
    try {
      if (options.strategy == Strategy::kTopDown) {
        SearchConfig search;
        search.grammar = spec.grammar;
        search.max_size = spec.max_size;
        search.max_candidates = st.max_candidates.value_or(spec.max_candidates);
        search.sketch = sketch;
        result = SynthesizeTopDown(task, grammar, search, train, prefix, options.jobs);
      } else {
        EvolveConfig evolve = spec.evolve;
        evolve.seed = DeriveSeed(spec.seed, 2000 + k);
        evolve.sketch = sketch;
        result = Evolve(task, grammar, evolve, train, prefix, options.jobs);
      }
    } catch (const SynthesisError&) {
      result.candidates.clear();
    }
    out.trained = static_cast<long>(result.candidates.size());
    if (result.solved()) {
      out.solved = true;
      out.ranked = result.candidates;
      out.best = result.candidates.front();
      out.reused = ReusedModules(*out.best.program);
      std::vector<ModulePtr> fresh;
      for (const auto& [name, m] : out.best.modules.fresh()) fresh.push_back(m);
      lib.AddFrozen(fresh);
      for (const ModulePtr& m : fresh) {
        out.added.push_back(m->name());
        report.checkpoints.emplace_back(m->name(), SerializeValues(m->params()));
      }
      std::tie(out.high_level, out.low_level) = TransferFlags(*out.best.program, lib);
    }
    if (st.baseline) {
      TrainConfig base = train;
      base.seed = DeriveSeed(spec.seed, 3000 + k);
      out.baseline = StandaloneBaseline(task, base);
    }
    out.library_after = lib.size();
    if (options.out_dir) lib.Write(*options.out_dir / ("library_" + std::to_string(k)));
    out.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.tasks.push_back(std::move(out));
  }
  return report;
}

std::vector<ForgettingCheck> CheckForgetting(const SequenceSpec& spec,
                                             const SequenceReport& report) {
  std::map<std::string, const std::string*> bytes;
  for (const auto& [name, b] : report.checkpoints) bytes[name] = &b;
  std::vector<ForgettingCheck> out;
  for (const TaskOutcome& t : report.tasks) {
    if (!t.solved) continue;
    ForgettingCheck c;
    c.task = t.index;
    c.recorded = t.best.test_metric;
    Task task = MakeSequenceTask(t.spec, DeriveSeed(spec.seed, static_cast<std::uint64_t>(t.index)));
    ModuleSet modules(&report.library);
    c.reevaluated = ScoreSplit(*FrozenForm(*t.best.program), modules, task.test, t.best.loss,
                               t.best.metric, spec.train.eval_batch, spec.train.eval)
                        .metric;
    c.metric_identical = std::bit_cast<std::uint64_t>(static_cast<double>(c.recorded)) ==
                         std::bit_cast<std::uint64_t>(static_cast<double>(c.reevaluated));
    c.checkpoints_identical = true;
    for (const std::string& name : t.added) {
      ModulePtr m = report.library.Find(name);
      auto it = bytes.find(name);
      c.checkpoints_identical = c.checkpoints_identical && m && it != bytes.end() &&
                                SerializeValues(m->params()) == *it->second;
    }
    out.push_back(c);
  }
  return out;
}

json ReportJson(const SequenceReport& report) {
  json tasks = json::array();
  for (const TaskOutcome& t : report.tasks) {
    json e = {{"index", t.index},
              {"task", t.task_name},
              {"generator", t.spec.generator},
              {"class", t.spec.digit},
              {"fraction", t.spec.fraction},
              {"type", t.type.ToString()},
              {"status", t.solved ? "solved" : "no_solution"},
              {"trained", t.trained},
              {"library_before", t.library_before},
              {"library_after", t.library_after},
              {"added", t.added},
              {"reused", t.reused},
              {"high_level_transfer", t.high_level},
              {"low_level_transfer", t.low_level}};
    if (t.solved) {
      e["best"] = CandidateJson(t.best);
      json top = json::array();
      for (std::size_t c = 0; c < std::min<std::size_t>(kReportedCandidates, t.ranked.size()); ++c) {
        top.push_back(CandidateJson(t.ranked[c]));
      }
      e["top"] = std::move(top);
    } else {
      e["best"] = nullptr;
      e["top"] = json::array();
    }
    e["baseline"] = t.baseline ? CandidateJson(*t.baseline) : json(nullptr);
    tasks.push_back(std::move(e));
  }
  json library = json::array();
  for (const ModulePtr& m : report.library.modules()) {
    library.push_back({{"name", m->name()}, {"signature", m->signature().ToString()}});
  }
  return {{"schema", "neurosyn.sequence_report/1"},
          {"sequence", report.name},
          {"strategy", ToString(report.strategy)},
          {"seed", report.seed},
          {"tasks", std::move(tasks)},
          {"library", std::move(library)}};
}

json TransferJson(const SequenceReport& report) {
  json rows = json::array();
  for (const TaskOutcome& t : report.tasks) {
    json r = {{"index", t.index},
              {"task", t.task_name},
              {"fraction", t.spec.fraction},
              {"synthesized", t.solved ? Number(t.best.test_metric) : json(nullptr)},
              {"baseline", t.baseline ? Number(t.baseline->test_metric) : json(nullptr)},
              {"metric", t.solved ? ToString(t.best.metric) : json(nullptr)},
              {"high_level_transfer", t.high_level},
              {"low_level_transfer", t.low_level}};
    rows.push_back(std::move(r));
  }
  return {{"schema", "neurosyn.transfer/1"}, {"sequence", report.name}, {"rows", std::move(rows)}};
}

json ForgettingJson(const std::vector<ForgettingCheck>& checks) {
  json rows = json::array();
  bool ok = true;
  for (const ForgettingCheck& c : checks) {
    rows.push_back({{"task", c.task},
                    {"recorded", Number(c.recorded)},
                    {"reevaluated", Number(c.reevaluated)},
                    {"metric_identical", c.metric_identical},
                    {"checkpoints_identical", c.checkpoints_identical}});
    ok = ok && c.metric_identical && c.checkpoints_identical;
  }
  return {{"schema", "neurosyn.forgetting/1"}, {"ok", ok}, {"checks", std::move(rows)}};
}

}  // namespace neurosyn

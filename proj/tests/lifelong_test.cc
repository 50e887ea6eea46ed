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

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "neurosyn/lifelong.h"
#include "neurosyn/syntax.h"

namespace neurosyn {
namespace {

using nlohmann::json;

json SmallSequence() {
  return json::parse(R"({
    "name": "T1",
    "seed": 3,
    "universe": {"tensors": ["real[8][8]", "real[16]", "bool[1]", "real[1]"], "adts": ["list"]},
    "grammar": {"max_size": 4, "max_candidates": 3},
    "train": {"epochs": 1, "lr": 0.003,
              "hyper": {"mlp_hidden": 8, "cnn_channels": [2], "lstm_hidden": 4}},
    "evolve": {"population": 4, "generations": 1, "max_size": 4},
    "tasks": [
      {"task": "recognize_glyph", "class": 1, "n": 100},
      {"task": "count_glyph", "class": 1, "n": 100, "baseline": true}
    ]
  })");
}

TEST_CASE("sequence specs parse, validate and round trip") {
  SequenceSpec s = ParseSequence(SmallSequence());
  CHECK(s.name == "T1");
  CHECK(s.seed == 3);
  CHECK(s.max_size == 4);
  CHECK(s.train.hyper.lstm_hidden == 4);
  CHECK(s.train.hyper.cnn_kernel == ModuleHyper{}.cnn_kernel);
  REQUIRE(s.tasks.size() == 2);
  CHECK(s.tasks[1].generator == "count_glyph");
  CHECK(s.tasks[1].baseline);
  CHECK(s.evolve.population == 4);

  json round = SequenceSpecJson(s);
  CHECK(round["schema"] == "neurosyn.sequence/1");
  CHECK(SequenceSpecJson(ParseSequence(round)) == round);

  // A bare task array; the universe comes from the task types.
  SequenceSpec bare = ParseSequence(json::parse(R"([{"task": "count_glyph", "class": 3, "fraction": 0.1}])"));
  CHECK(bare.tasks[0].fraction == doctest::Approx(0.1));
  TypeUniverse u(bare.universe);
  CHECK(u.Contains(ParseType("list<real[8][8]> -> real[1]")));
  CHECK_FALSE(u.ContainsTensor({Atom::kReal, {16}}));

  auto bad = [](const char* text) { return ParseSequence(json::parse(text)); };
  CHECK_THROWS_AS(bad(R"([])"), SequenceError);
  CHECK_THROWS_AS(bad(R"([{"task": "juggle"}])"), SequenceError);
  CHECK_THROWS_AS(bad(R"([{"task": "count_glyph", "class": 11}])"), SequenceError);
  CHECK_THROWS_AS(bad(R"([{"task": "count_glyph"}])"), SequenceError);
  CHECK_THROWS_AS(bad(R"([{"task": "sum_glyph", "fraction": 0}])"), SequenceError);
  CHECK_THROWS_AS(bad(R"([{"task": "sum_glyph", "colour": 1}])"), SequenceError);
  CHECK_THROWS_AS(bad(R"({"tasks": [{"task": "sum_glyph"}], "train": {"lr": "fast"}})"),
                  SequenceError);
  CHECK_THROWS_AS(bad(R"({"universe": {"tensors": ["real[8][8]", "real[1]"], "adts": ["graph"]},
                          "tasks": [{"task": "sum_glyph"}]})"),
                  SequenceError);
  CHECK_THROWS_AS(ReadSequence("/nonexistent/sequence.json"), SequenceError);
}

TEST_CASE("generator types match the generated tasks") {
  for (const char* g : {"recognize_glyph", "classify_glyph", "count_glyph", "sum_glyph",
                        "regress_glyph", "regress_color", "shortest_path_glyph",
                        "shortest_path_color"}) {
    SequenceTask t;
    t.generator = g;
    t.n = 30;
    INFO(g);
    CHECK(MakeSequenceTask(t, 1).type == SequenceTaskType(t));
  }
}

TEST_CASE("standalone baseline architectures") {
  Task count = MakeCountTask(2, {60, 1}, 1);
  TermPtr p = BaselineProgram(count);
  CHECK(PrintProgram(*p) == "compose(nn_base_1, map_l(compose(nn_base_2, nn_base_3)))");
  CHECK(CheckType(*p, count.type));

  Task grid = MakeShortestPathTask(GridStyle::kGlyph, {30, 1}, 1);
  Task linear = LinearizeGrid(grid);
  CHECK(linear.type.ToString() == "list<real[2][8][8]> -> list<real[1]>");
  CHECK(linear.test.x.kind == Value::Kind::kList);
  CHECK(linear.test.x.offsets == grid.test.x.offsets);
  CHECK(linear.test.y.data.value() == grid.test.y.data.value());
  TermPtr g = BaselineProgram(grid);
  CHECK(PrintProgram(*g) == "compose(conv_l(nn_base_1), map_l(compose(nn_base_2, nn_base_3)))");
  CHECK(CheckType(*g, linear.type));

  CHECK_THROWS_AS(BaselineProgram(MakeRecognizeTask(1, {40, 1}, 1)), SequenceError);

  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.hyper.lstm_hidden = 4;
  cfg.hyper.cnn_channels = {2};
  TrainedCandidate a = StandaloneBaseline(count, cfg);
  TrainedCandidate b = StandaloneBaseline(count, cfg);
  CHECK(std::isfinite(a.test_metric));
  CHECK(a.test_metric == b.test_metric);
  TrainedCandidate gb = StandaloneBaseline(MakeShortestPathTask(GridStyle::kGlyph, {20, 1}, 2), cfg);
  CHECK(std::isfinite(gb.test_metric));
}

TEST_CASE("reuse detection and transfer flags are syntactic") {
  Library lib;
  lib.AddFrozen({InstantiateFor(ParseType("list<real[16]> -> real[1]"), false, {}, 1, "agg"),
                 InstantiateFor(ParseType("real[8][8] -> real[16]"), false, {}, 2, "cnn"),
                 InstantiateFor(ParseType("real[1] -> (real[16] -> real[1])"), false, {}, 3, "body")});
  NameResolver r = WithFreshDeclarations({{"f", ParseType("real[8][8] -> real[16]")},
                                          {"g", ParseType("list<real[16]> -> real[1]")}},
                                         lib.Resolver());
  auto flags = [&](const char* text) { return TransferFlags(*ParseProgram(text, r), lib); };

  TermPtr none = ParseProgram("compose(g, map_l(f))", r);
  CHECK(ReusedModules(*none).empty());
  CHECK(flags("compose(g, map_l(f))") == std::make_pair(false, false));
  CHECK(flags("compose(lib.agg, map_l(f))") == std::make_pair(true, false));
  CHECK(flags("compose(g, map_l(lib.cnn))") == std::make_pair(false, true));
  CHECK(flags("compose(lib.agg, map_l(lib.cnn))") == std::make_pair(true, true));
  CHECK(flags("fold_l(lib.body, zeros(1))") == std::make_pair(true, false));
  TermPtr twice = ParseProgram("compose(lib.agg, map_l(compose(f, lib.cnn)))", r);
  CHECK(ReusedModules(*twice) == std::vector<std::string>{"lib.agg", "lib.cnn"});

  TermPtr frozen = FrozenForm(*ParseProgram("compose(g, map_l(lib.cnn))", r));
  CHECK(PrintProgram(*frozen) == "compose(lib.g, map_l(lib.cnn))");
}

SequenceSpec Small() { return ParseSequence(SmallSequence()); }

TEST_CASE("a one-task sequence grows the library by the best program's modules") {
  SequenceSpec s = Small();
  s.tasks.resize(1);
  SequenceReport r = RunSequence(s, {});
  REQUIRE(r.tasks.size() == 1);
  const TaskOutcome& t = r.tasks[0];
  REQUIRE(t.solved);
  CHECK(t.library_before == 0);
  CHECK(t.library_after == t.best.modules.fresh().size());
  CHECK(r.library.size() == t.library_after);
  std::set<std::string> names;
  for (const auto& [name, m] : t.best.modules.fresh()) names.insert("lib." + name);
  CHECK(std::set<std::string>(t.added.begin(), t.added.end()) == names);
  for (const ModulePtr& m : r.library.modules()) CHECK(m->frozen());
  CHECK(t.ranked.size() == static_cast<std::size_t>(t.trained));
  CHECK(PrintProgram(*t.ranked.front().program) == PrintProgram(*t.best.program));
}

TEST_CASE("sequence runs: reuse, forgetting, snapshots and determinism") {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "neurosyn_lifelong_test";
  std::filesystem::remove_all(dir);
  SequenceSpec s = Small();
  RunOptions opt;
  opt.out_dir = dir;
  SequenceReport r = RunSequence(s, opt);
  REQUIRE(r.tasks.size() == 2);
  CHECK(r.tasks[0].library_after <= r.tasks[1].library_before);
  CHECK(r.tasks[1].library_before <= r.tasks[1].library_after);
  for (const TaskOutcome& t : r.tasks) {
    REQUIRE(t.solved);
    // Names the best program references from the library were there before.
    for (const std::string& name : t.reused) {
      CHECK(name.rfind("lib.nn_t1_", 0) == 0);
      CHECK(name.rfind("lib.nn_t1_" + std::to_string(t.index), 0) != 0);
    }
  }
  REQUIRE(r.tasks[1].baseline.has_value());
  CHECK_FALSE(r.tasks[0].baseline.has_value());

  std::vector<ForgettingCheck> checks = CheckForgetting(s, r);
  REQUIRE(checks.size() == 2);
  for (const ForgettingCheck& c : checks) {
    CHECK(c.metric_identical);
    CHECK(c.checkpoints_identical);
  }
  CHECK(ForgettingJson(checks)["ok"] == true);

  // Snapshots: the first library is a prefix of the second, byte for byte.
  Library first = Library::Read(dir / "library_1");
  Library second = Library::Read(dir / "library_2");
  REQUIRE(first.size() == r.tasks[0].library_after);
  REQUIRE(second.size() == r.tasks[1].library_after);
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first.modules()[i]->name() == second.modules()[i]->name());
    CHECK(SerializeValues(first.modules()[i]->params()) ==
          SerializeValues(second.modules()[i]->params()));
  }

  json report = ReportJson(r);
  CHECK(report["schema"] == "neurosyn.sequence_report/1");
  CHECK(report["tasks"].size() == 2);
  CHECK(report["tasks"][1]["baseline"].is_object());
  CHECK_FALSE(report.dump().find("seconds") != std::string::npos);
  json transfer = TransferJson(r);
  CHECK(transfer["rows"][1]["fraction"] == 1.0);
  CHECK(transfer["rows"][1]["baseline"].is_number());

  RunOptions two;
  two.jobs = 2;
  CHECK(ReportJson(RunSequence(s, two)).dump() == report.dump());
  std::filesystem::remove_all(dir);
}

TEST_CASE("a task without candidates is recorded and the sequence continues") {
  SequenceSpec s = Small();
  s.grammar.fresh_modules = false;
  SequenceReport r = RunSequence(s, {});
  REQUIRE(r.tasks.size() == 2);
  for (const TaskOutcome& t : r.tasks) {
    CHECK_FALSE(t.solved);
    CHECK(t.library_before == t.library_after);
  }
  CHECK(ReportJson(r)["tasks"][0]["status"] == "no_solution");
  CHECK(CheckForgetting(s, r).empty());
}

TEST_CASE("evolutionary sequences and sketches") {
  SequenceSpec s = Small();
  s.tasks[1].sketch = "compose(hole<list<real[16]> -> real[1]>, map_l(hole<real[8][8] -> real[16]>))";
  s.tasks[1].baseline = false;
  RunOptions opt;
  opt.strategy = Strategy::kEvolve;
  SequenceReport r = RunSequence(s, opt);
  REQUIRE(r.tasks[1].solved);
  CHECK(PrintProgram(*r.tasks[1].best.program).find("map_l(") != std::string::npos);
  CHECK(ReportJson(r)["strategy"] == "evolve");
  CHECK(ReportJson(RunSequence(s, opt)).dump() == ReportJson(r).dump());

  SequenceReport t = RunSequence(s, {});
  CHECK(PrintProgram(*t.tasks[1].best.program).rfind("compose(", 0) == 0);

  s.tasks[1].sketch = "map_l(hole<real[8][8] -> real[16]>)";
  CHECK(RunSequence(s, {}).tasks[1].solved == false);
  s.tasks[1].sketch = "compose(";
  CHECK_THROWS_AS(RunSequence(s, {}), SequenceError);
}

}  // namespace
}  // namespace neurosyn

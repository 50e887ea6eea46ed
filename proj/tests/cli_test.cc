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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
};

Run Cli(const std::string& args) {
  std::string cmd = std::string(NEUROSYN_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path Scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("neurosyn_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const std::string kSource = NEUROSYN_SOURCE_DIR;

TEST_CASE("exit codes") {
  CHECK(Cli("--help").code == 0);
  CHECK(Cli("").code == 2);
  CHECK(Cli("frobnicate").code == 2);
  CHECK(Cli("gen --task recognize --class 11 --out /tmp/neurosyn_cli_unused").code == 2);
  CHECK(Cli("gen --task nonsense --out /tmp/neurosyn_cli_unused").code == 2);
  CHECK(Cli("gen --task regress --style sepia --out /tmp/neurosyn_cli_unused").code == 2);
  CHECK(Cli("census --max-size 3").code == 2);
  CHECK(Cli("runseq --sequence /nonexistent.json").code == 2);
  CHECK(Cli("synth --task /nonexistent").code == 2);
  CHECK(Cli("gradcheck --programs 1").code == 0);
  CHECK(Cli("gradcheck --programs 0 --inject-sign-flip").code == 1);
}

TEST_CASE("census prints one line per size") {
  Run r = Cli("census --config " + kSource + "/configs/reference_census.json --max-size 6");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("size=1 typed=1 untyped=") == 0);
  CHECK(r.out.find("size=5 typed=42 untyped=") != std::string::npos);
  CHECK(r.out.find("size=6 typed=124 untyped=") != std::string::npos);

  Run typed = Cli("census --config " + kSource + "/configs/reference_census.json --typed --max-size 2");
  CHECK(typed.out == "size=1 typed=1\nsize=2 typed=0\n");

  Run j = Cli("census --json --type 'real[8][8] -> real[8][8]' --max-size 3");
  REQUIRE(j.code == 0);
  auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed["schema"] == "neurosyn.census/1");
  CHECK(parsed["rows"].size() == 3);
}

TEST_CASE("gen is deterministic per seed") {
  fs::path dir = Scratch("gen");
  REQUIRE(Cli("gen --task count --class 2 --n 100 --seed 4 --out " + (dir / "a").string()).code == 0);
  REQUIRE(Cli("gen --task count --class 2 --n 100 --seed 4 --out " + (dir / "b").string()).code == 0);
  REQUIRE(Cli("gen --task count --class 2 --n 100 --seed 5 --out " + (dir / "c").string()).code == 0);
  for (const char* f : {"manifest.json", "train_x.bin", "test_y.bin"}) {
    CHECK(Slurp(dir / "a" / f) == Slurp(dir / "b" / f));
  }
  CHECK(Slurp(dir / "a" / "train_x.bin") != Slurp(dir / "c" / "train_x.bin"));
  fs::remove_all(dir);
}

TEST_CASE("synth output is independent of the job count") {
  fs::path dir = Scratch("synth");
  REQUIRE(Cli("gen --task recognize --class 1 --n 100 --out " + (dir / "data").string()).code == 0);
  std::string base = "synth --task " + (dir / "data").string() + " --budget 3 --epochs 1 --seed 2";
  REQUIRE(Cli(base + " --jobs 1 --out " + (dir / "j1").string()).code == 0);
  REQUIRE(Cli(base + " --jobs 3 --out " + (dir / "j3").string()).code == 0);
  std::string a = Slurp(dir / "j1" / "synth.json");
  CHECK(!a.empty());
  CHECK(a == Slurp(dir / "j3" / "synth.json"));
  CHECK(nlohmann::json::parse(a)["schema"] == "neurosyn.synth/1");
  CHECK(Cli(base + " --strategy sideways --out " + (dir / "x").string()).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("runseq writes reports and snapshots deterministically") {
  fs::path dir = Scratch("runseq");
  {
    std::ofstream seq(dir / "seq.json");
    seq << R"({"name": "cli", "seed": 7,
      "grammar": {"max_size": 3, "max_candidates": 2},
      "train": {"epochs": 1, "hyper": {"mlp_hidden": 4, "cnn_channels": [2], "lstm_hidden": 4}},
      "tasks": [{"task": "recognize_glyph", "class": 0, "n": 60},
                {"task": "recognize_glyph", "class": 1, "n": 60}]})";
  }
  std::string base = "runseq --sequence " + (dir / "seq.json").string();
  REQUIRE(Cli(base + " --jobs 1 --out " + (dir / "a").string()).code == 0);
  REQUIRE(Cli(base + " --jobs 4 --out " + (dir / "b").string()).code == 0);
  for (const char* f : {"report.json", "transfer.json", "forgetting.json"}) {
    CHECK(!Slurp(dir / "a" / f).empty());
    CHECK(Slurp(dir / "a" / f) == Slurp(dir / "b" / f));
  }
  CHECK(fs::exists(dir / "a" / "library_1" / "library.json"));
  CHECK(fs::exists(dir / "a" / "library_2" / "library.json"));
  CHECK(nlohmann::json::parse(Slurp(dir / "a" / "forgetting.json"))["ok"] == true);

  REQUIRE(Cli(base + " --seed 8 --out " + (dir / "c").string()).code == 0);
  CHECK(Slurp(dir / "a" / "report.json") != Slurp(dir / "c" / "report.json"));
  fs::remove_all(dir);
}

}  // namespace

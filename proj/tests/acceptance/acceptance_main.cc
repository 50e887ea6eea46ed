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

// Runs the acceptance criteria and prints one PASS/FAIL line each.
//
//   acceptance            all criteria
//   acceptance 3 5        only criteria 3 and 5

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <set>
#include <string>

#include "acceptance/acceptance.h"

namespace neurosyn::acceptance {

std::string SourcePath(const std::string& relative) {
  return std::string(NEUROSYN_SOURCE_DIR) + "/" + relative;
}

std::string Format(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  char buf[2048];
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

}  // namespace neurosyn::acceptance

int main(int argc, char** argv) {
  using namespace neurosyn::acceptance;
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"typing soundness", TypingSoundness},
      {"census typed/untyped ratio", CensusRatios},
      {"map/fold/conv oracles", CombinatorOracles},
      {"min-plus relaxation = bellman-ford", MinPlusShortestPath},
      {"gradient checks", Gradchecks},
      {"count via top-down (budget 20)", CountTopDown},
      {"count transfer at 10% data", CountTransfer},
      {"relaxation kernel reuse", KernelReuse},
      {"no forgetting", NoForgetting},
      {"determinism", Determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (int i = 0; i < 10; ++i) {
    if (!only.empty() && !only.count(i + 1)) continue;
    Stopwatch clock;
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s  C%-2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                o.detail.c_str(), clock.Seconds());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

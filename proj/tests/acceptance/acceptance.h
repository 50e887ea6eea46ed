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

#ifndef NEUROSYN_TESTS_ACCEPTANCE_ACCEPTANCE_H_
#define NEUROSYN_TESTS_ACCEPTANCE_ACCEPTANCE_H_

#include <chrono>
#include <string>

namespace neurosyn::acceptance {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string SourcePath(const std::string& relative);
std::string Format(const char* fmt, ...);

Outcome TypingSoundness();
Outcome CensusRatios();
Outcome CombinatorOracles();
Outcome MinPlusShortestPath();
Outcome Gradchecks();
Outcome CountTopDown();
Outcome CountTransfer();
Outcome KernelReuse();
Outcome NoForgetting();
Outcome Determinism();

}  // namespace neurosyn::acceptance

#endif  // NEUROSYN_TESTS_ACCEPTANCE_ACCEPTANCE_H_

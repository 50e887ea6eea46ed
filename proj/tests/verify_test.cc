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

#include "doctest.h"
#include "neurosyn/syntax.h"
#include "neurosyn/typing.h"
#include "neurosyn/verify.h"

namespace neurosyn {
namespace {

TEST_CASE("random inputs conform to their types") {
  std::mt19937_64 rng(1);
  for (const char* t : {"real[3]", "bool[1]", "list<real[2][2]>", "graph<real[4]>"}) {
    Type type = ParseType(t);
    Value v = RandomInput(type, 3, rng);
    CHECK(v.batch() == 3);
    for (int b = 0; b < 3; ++b) {
      if (type.is_adt()) CHECK(v.length(b) >= 1);
    }
  }
  CHECK_THROWS_AS(RandomInput(ParseType("real[1] -> real[1]"), 1, rng), std::invalid_argument);
}

TEST_CASE("template and program gradients pass; a sign flip is caught") {
  std::vector<GradcheckRow> t = TemplateGradchecks(1);
  CHECK(t.size() == 7);
  for (const GradcheckRow& r : t) {
    INFO(r.subject << " " << r.result.max_rel_error);
    CHECK(r.result.passed);
  }
  std::vector<GradcheckRow> p = ProgramGradchecks(1, 5);
  REQUIRE(p.size() == 5);
  for (const GradcheckRow& r : p) {
    INFO(r.subject << " " << r.result.max_rel_error);
    CHECK(r.result.passed);
  }
  CHECK(AllPassed(t));
  CHECK(GradcheckJson(p).size() == 5);

  SetSignFlipBugForTesting(true);
  bool caught = !AllPassed(TemplateGradchecks(1));
  SetSignFlipBugForTesting(false);
  CHECK(caught);
}

}  // namespace
}  // namespace neurosyn

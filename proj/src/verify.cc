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

#include "neurosyn/verify.h"

#include <set>

#include "neurosyn/evolve.h"
#include "neurosyn/seed.h"
#include "neurosyn/syntax.h"
#include "neurosyn/taskgen.h"

namespace neurosyn {

namespace {

Tensor RandomTensor(Shape shape, const TensorType& t, std::mt19937_64& rng) {
  Tensor out(std::move(shape));
  std::normal_distribution<Real> normal(0, 1);
  std::uniform_real_distribution<Real> unit(0, 1);
  for (long i = 0; i < out.size(); ++i) out[i] = t.atom == Atom::kBool ? unit(rng) : normal(rng);
  return out;
}

ModuleHyper SmallHyper() {
  ModuleHyper h;
  h.mlp_hidden = 6;
  h.cnn_channels = {2, 3};
  h.lstm_hidden = 4;
  return h;
}

GradCheckResult CheckProgram(const TermPtr& program, const ModuleSet& modules, const Value& x,
                             std::mt19937_64& rng, const GradCheckOptions& options) {
  Var y0 = Evaluate(*program, x, modules).data;
  Tensor target = RandomTensor(y0.shape(), {Atom::kReal, {}}, rng);
  return CheckGradients([&] { return MseLoss(Evaluate(*program, x, modules).data, target); },
                        modules.TrainableParams(), options);
}

}  // namespace

Value RandomInput(const Type& type, int batch, std::mt19937_64& rng) {
  if (!type.is_tensor() && !type.is_adt()) {
    throw std::invalid_argument("no runtime values of function type " + type.ToString());
  }
  const TensorType& e = type.tensor();
  auto rows = [&](int n) {
    Shape s{n};
    s.insert(s.end(), e.dims.begin(), e.dims.end());
    return Constant(RandomTensor(s, e, rng));
  };
  if (type.is_tensor()) return Value::OfTensor(rows(batch));
  std::vector<int> offsets{0};
  if (type.adt() == AdtKind::kList) {
    std::uniform_int_distribution<int> len(1, 4);
    for (int b = 0; b < batch; ++b) offsets.push_back(offsets.back() + len(rng));
    Var data = rows(offsets.back());
    return Value::OfList(std::move(data), std::move(offsets));
  }
  std::uniform_int_distribution<int> side(2, 3);
  std::vector<std::vector<std::pair<int, int>>> edges;
  for (int b = 0; b < batch; ++b) {
    int s = side(rng);
    offsets.push_back(offsets.back() + s * s);
    edges.emplace_back();
    auto adj = GridAdjacency(s);
    for (int u = 0; u < s * s; ++u) {
      for (int v : adj[u]) {
        if (v > u) edges.back().emplace_back(u, v);
      }
    }
  }
  auto topo = MakeTopology(offsets, edges);
  Var data = rows(offsets.back());
  return Value::OfGraph(std::move(data), offsets, std::move(topo));
}

ModuleSet InstantiateFresh(const TermPtr& program, const ModuleHyper& hyper, std::uint64_t seed) {
  ModuleSet modules;
  std::set<std::string> seen;
  std::uint64_t k = 0;
  for (const TermPath& p : AllPaths(program)) {
    const Term& t = *Subterm(program, p);
    if (t.kind() != Term::Kind::kLibRef || !t.fresh()) continue;
    if (t.name().empty()) throw std::invalid_argument("fresh module reference without a name");
    if (!seen.insert(t.name()).second) continue;
    modules.AddFresh(
        InstantiateFor(t.type_annotation(), false, hyper, DeriveSeed(seed, k++), t.name()));
  }
  return modules;
}

std::vector<GradcheckRow> TemplateGradchecks(std::uint64_t seed, const GradCheckOptions& options) {
  struct Case {
    const char* name;
    const char* signature;
  };
  const Case cases[] = {
      {"mlp", "real[6] -> real[3]"},
      {"mlp/sigmoid", "real[6] -> bool[1]"},
      {"mlp/curried", "real[2] -> (real[3] -> real[2])"},
      {"cnn/rank2", "real[6][6] -> real[4]"},
      {"cnn/rank3", "real[2][6][6] -> real[2]"},
      {"lstm", "list<real[3]> -> real[2]"},
      {"lstm/residual", "list<real[2]> -> real[2]"},
  };
  std::mt19937_64 rng(DeriveSeed(seed, 0x7E417));
  std::vector<GradcheckRow> rows;
  std::uint64_t k = 0;
  for (const Case& c : cases) {
    const Type sig = ParseType(c.signature);
    GradCheckOptions o = options;
    o.seed = DeriveSeed(seed, 100 + k);
    ModulePtr m = InstantiateFor(sig, false, SmallHyper(), DeriveSeed(seed, k++), "m");
    std::vector<Value> args = {RandomInput(sig.input(), 3, rng)};
    if (sig.output().is_function()) args.push_back(RandomInput(sig.output().input(), 3, rng));
    Var y0 = m->Call(args, {});
    Tensor target = RandomTensor(y0.shape(), {Atom::kReal, {}}, rng);
    rows.push_back({c.name, CheckGradients([&] { return MseLoss(m->Call(args, {}), target); },
                                           m->params().Trainable(), o)});
  }
  return rows;
}

std::vector<GradcheckRow> ProgramGradchecks(std::uint64_t seed, int count,
                                            const GradCheckOptions& options) {
  UniverseConfig uc;
  uc.tensors = {{Atom::kReal, {4, 4}}, {Atom::kReal, {3}}, {Atom::kReal, {1}}, {Atom::kBool, {1}}};
  GrammarConfig gc;
  gc.conv_repeats = {1, 2};
  Grammar grammar(Library{}, TypeUniverse(uc), gc);
  const Type targets[] = {
      ParseType("list<real[4][4]> -> real[1]"),
      ParseType("graph<real[4][4]> -> graph<real[1]>"),
      ParseType("list<real[3]> -> list<real[3]>"),
      ParseType("real[4][4] -> bool[1]"),
      ParseType("graph<real[3]> -> graph<real[3]>"),
  };
  ProgramSampler sampler(grammar);
  Rng rng(DeriveSeed(seed, 0x960C));
  std::mt19937_64 values(DeriveSeed(seed, 0x9A1));
  std::vector<GradcheckRow> rows;
  for (int i = 0; i < count; ++i) {
    const Type& target = targets[i % std::size(targets)];
    // Prefer programs with some combinator structure.
    TermPtr program;
    for (int attempt = 0; attempt < 20; ++attempt) {
      program = sampler.Sample(target, 5, rng);
      if (ProgramSize(*program) >= 3) break;
    }
    int k = 0;
    program = NameFreshModules(program, [&] { return "g_" + std::to_string(++k); });
    ModuleSet modules = InstantiateFresh(program, SmallHyper(), DeriveSeed(seed, 500 + i));
    GradCheckOptions o = options;
    o.seed = DeriveSeed(seed, 900 + i);
    rows.push_back({PrintProgram(*program),
                    CheckProgram(program, modules, RandomInput(target.input(), 2, values), values,
                                 o)});
  }
  return rows;
}

bool AllPassed(const std::vector<GradcheckRow>& rows) {
  for (const GradcheckRow& r : rows) {
    if (!r.result.passed) return false;
  }
  return !rows.empty();
}

nlohmann::json GradcheckJson(const std::vector<GradcheckRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const GradcheckRow& r : rows) {
    out.push_back({{"subject", r.subject},
                   {"max_rel_error", r.result.max_rel_error},
                   {"probes", r.result.probes},
                   {"kinks", r.result.kinks},
                   {"passed", r.result.passed}});
  }
  return out;
}

}  // namespace neurosyn

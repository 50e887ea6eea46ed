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
#include <random>

#include "doctest.h"
#include "neurosyn/gradcheck.h"
#include "neurosyn/library.h"

namespace neurosyn {
namespace {

Tensor Random(Shape shape, std::mt19937_64& rng) {
  Tensor t(std::move(shape));
  std::normal_distribution<Real> n(0, 1);
  for (long i = 0; i < t.size(); ++i) t[i] = n(rng);
  return t;
}

Type Sig(const char* text) { return ParseType(text); }

TEST_CASE("template kind follows the signature") {
  KindChoice c = SelectKind(Sig("real[8][8] -> real[16]"));
  CHECK(c.kind == ModuleKind::kCnn);
  CHECK(c.activation == Activation::kLinear);
  c = SelectKind(Sig("real[16] -> bool[1]"));
  CHECK(c.kind == ModuleKind::kMlp);
  CHECK(c.activation == Activation::kSigmoid);
  c = SelectKind(Sig("list<real[2]> -> real[1]"));
  CHECK(c.kind == ModuleKind::kRnn);
  CHECK(c.activation == Activation::kLinear);
  CHECK(SelectKind(Sig("real[16] -> real[10]"), true).activation == Activation::kSoftmax);
  CHECK(SelectKind(Sig("real[1] -> (real[16] -> real[1])")).kind == ModuleKind::kMlp);

  CHECK_THROWS_AS(SelectKind(Sig("graph<real[2]> -> real[1]")), std::invalid_argument);
  CHECK_THROWS_AS(SelectKind(Sig("real[4] -> list<real[4]>")), std::invalid_argument);
  CHECK_THROWS_AS(SelectKind(Sig("(real[1] -> real[1]) -> real[1]")), std::invalid_argument);
  CHECK_FALSE(IsModuleSignature(Sig("graph<real[2]> -> real[1]")));
}

TEST_CASE("instantiate") {
  ModuleHyper h;
  ModulePtr mlp = Instantiate(ModuleKind::kMlp, Sig("real[16] -> real[4]"),
                              Activation::kLinear, h, 1);
  // 16*32 + 32 + 32*4 + 4.
  CHECK(mlp->params().NumParams() == 676);
  CHECK_FALSE(mlp->frozen());

  std::mt19937_64 rng(2);
  ModulePtr cnn = InstantiateFor(Sig("real[8][8] -> real[16]"), false, h, 3);
  CHECK(cnn->kind() == ModuleKind::kCnn);
  Var y = cnn->Call({Value::OfTensor(Constant(Random({5, 8, 8}, rng)))}, {});
  CHECK(y.shape() == Shape{5, 16});

  ModulePtr rec = InstantiateFor(Sig("real[16] -> bool[1]"), false, h, 4);
  Var p = rec->Call({Value::OfTensor(Constant(Random({7, 16}, rng)))}, {});
  CHECK(p.shape() == Shape{7, 1});
  for (Real v : p.value().values()) CHECK((v > 0 && v < 1));

  ModulePtr cls = InstantiateFor(Sig("real[16] -> real[10]"), true, h, 4);
  Var q = cls->Call({Value::OfTensor(Constant(Random({3, 16}, rng)))}, {});
  for (int r = 0; r < 3; ++r) {
    Real s = 0;
    for (int k = 0; k < 10; ++k) s += q.value()[r * 10 + k];
    CHECK(s == doctest::Approx(1).epsilon(1e-6));
  }

  ModulePtr a = InstantiateFor(Sig("real[8][8] -> real[16]"), false, h, 9);
  ModulePtr b = InstantiateFor(Sig("real[8][8] -> real[16]"), false, h, 9);
  ModulePtr c = InstantiateFor(Sig("real[8][8] -> real[16]"), false, h, 10);
  CHECK(SerializeValues(a->params()) == SerializeValues(b->params()));
  CHECK(SerializeValues(a->params()) != SerializeValues(c->params()));

  CHECK_THROWS_AS(Instantiate(ModuleKind::kCnn, Sig("real[16] -> real[4]"),
                              Activation::kLinear, h, 1),
                  std::invalid_argument);
}

TEST_CASE("rnn consumes variable-length lists") {
  std::mt19937_64 rng(5);
  ModulePtr rnn = InstantiateFor(Sig("list<real[3]> -> real[2]"), false, {}, 1);
  Tensor data = Random({6, 3}, rng);
  Value both = Value::OfList(Constant(data), {0, 2, 2, 6});
  Var y = rnn->Call({both}, {});
  CHECK(y.shape() == Shape{3, 2});
  // Each sample alone gives the same row as in the batch.
  Tensor tail(Shape{4, 3});
  for (int i = 0; i < 12; ++i) tail[i] = data[6 + i];
  Var alone = rnn->Call({Value::OfList(Constant(tail), {0, 4})}, {});
  for (int k = 0; k < 2; ++k) CHECK(alone.value()[k] == doctest::Approx(y.value()[4 + k]));
  Tensor head(Shape{2, 3});
  for (int i = 0; i < 6; ++i) head[i] = data[i];
  Var first = rnn->Call({Value::OfList(Constant(head), {0, 2})}, {});
  for (int k = 0; k < 2; ++k) CHECK(first.value()[k] == doctest::Approx(y.value()[k]));
}

TEST_CASE("endomorphic rnn kernels are residual on the first element") {
  std::mt19937_64 rng(6);
  ModulePtr k = InstantiateFor(Sig("list<real[2]> -> real[2]"), false, {}, 3);
  k->mutable_params().Set("head.w", Tensor(Shape{16, 2}));
  k->mutable_params().Set("head.b", Tensor(Shape{2}));
  Tensor data = Random({5, 2}, rng);
  Var y = k->Call({Value::OfList(Constant(data), {0, 0, 3, 5})}, {});
  REQUIRE(y.shape() == Shape{3, 2});
  CHECK(y.value()[0] == 0);
  CHECK(y.value()[1] == 0);
  for (int j = 0; j < 2; ++j) {
    CHECK(y.value()[2 + j] == data[j]);
    CHECK(y.value()[4 + j] == data[6 + j]);
  }
  // Not endomorphic: no residual, a zero head gives zeros.
  ModulePtr c = InstantiateFor(Sig("list<real[2]> -> real[1]"), false, {}, 3);
  c->mutable_params().Set("head.w", Tensor(Shape{16, 1}));
  c->mutable_params().Set("head.b", Tensor(Shape{1}));
  Var z = c->Call({Value::OfList(Constant(data), {0, 5})}, {});
  CHECK(z.value()[0] == 0);
}

TEST_CASE("library growth and freezing") {
  ModuleHyper h;
  Library lib;
  std::vector<ModulePtr> first;
  for (int i = 0; i < 4; ++i) {
    first.push_back(InstantiateFor(Sig("real[16] -> bool[1]"), false, h, i,
                                   "nn_t_1_" + std::to_string(i)));
  }
  lib.AddFrozen(first);
  Library before = lib;
  lib.AddFrozen({InstantiateFor(Sig("real[4] -> real[1]"), false, h, 7, "nn_t_2_0"),
                 InstantiateFor(Sig("real[4] -> real[1]"), false, h, 8, "nn_t_2_1")});
  REQUIRE(lib.size() == 6);
  for (std::size_t i = 0; i < before.size(); ++i) {
    CHECK(lib.modules()[i] == before.modules()[i]);
  }
  CHECK(lib.Find("lib.nn_t_2_1") != nullptr);
  CHECK(lib.Find("nn_t_2_1") == nullptr);
  for (const ModulePtr& m : lib.modules()) CHECK(m->frozen());

  CHECK_THROWS_AS(lib.AddFrozen({InstantiateFor(Sig("real[4] -> real[1]"), false, h, 1,
                                                "nn_t_3_0"),
                                 InstantiateFor(Sig("real[4] -> real[1]"), false, h, 1,
                                                "nn_t_1_2")}),
                  std::invalid_argument);
  CHECK(lib.size() == 6);

  ModulePtr m = lib.Find("lib.nn_t_1_0");
  const std::string& pname = m->params().entries().front().first;
  CHECK_THROWS_AS(m->mutable_params().Set(pname, Tensor(m->params().Get(pname).shape())),
                  FrozenParameterError);

  NameResolver r = before.Resolver();
  CHECK(r("lib.nn_t_1_3").has_value());
  CHECK_FALSE(r("lib.nn_t_2_0").has_value());
  for (const ModulePtr& e : before.modules()) {
    auto info = lib.Resolver()(e->name());
    REQUIRE(info.has_value());
    CHECK(info->signature == e->signature());
  }
}

TEST_CASE("fresh candidates") {
  ModuleHyper h;
  Library lib;
  Type sig = Sig("real[16] -> bool[1]");
  auto only = FreshCandidates(lib, sig, h, 1);
  REQUIRE(only.size() == 1);
  CHECK(only[0]->kind() == ModuleKind::kMlp);
  CHECK_FALSE(only[0]->frozen());

  lib.AddFrozen({InstantiateFor(sig, false, h, 2, "recognizer")});
  auto two = FreshCandidates(lib, sig, h, 1);
  REQUIRE(two.size() == 2);
  CHECK(two[0]->name() == "lib.recognizer");
  CHECK(two[0]->frozen());
  CHECK_FALSE(two[1]->frozen());

  CHECK(FreshCandidates(lib, Sig("graph<real[2]> -> real[1]"), h, 1).empty());
}

TEST_CASE("library manifest round trip") {
  ModuleHyper h;
  Library lib;
  lib.AddFrozen({InstantiateFor(Sig("real[8][8] -> real[16]"), false, h, 1, "cnn"),
                 InstantiateFor(Sig("list<real[2]> -> real[2]"), false, h, 2, "kernel"),
                 InstantiateFor(Sig("real[1] -> (real[16] -> real[1])"), false, h, 3, "step"),
                 MakeMinPlusRelaxation("relax")});
  auto dir = std::filesystem::temp_directory_path() / "neurosyn_library_test";
  std::filesystem::remove_all(dir);
  lib.Write(dir);
  Library back = Library::Read(dir);
  REQUIRE(back.size() == lib.size());
  for (std::size_t i = 0; i < lib.size(); ++i) {
    const NeuralModule& a = *lib.modules()[i];
    const NeuralModule& b = *back.modules()[i];
    CHECK(a.name() == b.name());
    CHECK(a.signature() == b.signature());
    CHECK(a.kind() == b.kind());
    CHECK(b.frozen());
    CHECK(SerializeValues(a.params()) == SerializeValues(b.params()));
  }
  std::filesystem::remove_all(dir);
}

void RequireGradOk(const std::function<Var()>& f, const std::vector<Var>& ps) {
  GradCheckOptions o;
  o.probes = 60;
  GradCheckResult r = CheckGradients(f, ps, o);
  INFO("max rel error " << r.max_rel_error << ", kinks " << r.kinks);
  CHECK(r.passed);
}

TEST_CASE("template gradients match finite differences") {
  std::mt19937_64 rng(11);
  ModuleHyper h;
  h.mlp_hidden = 8;
  h.lstm_hidden = 5;
  auto check = [&](const char* sig, std::vector<Value> args) {
    INFO(sig);
    ModulePtr m = InstantiateFor(Sig(sig), false, h, 21);
    Var y0 = m->Call(args, {});
    Tensor target = Random(y0.shape(), rng);
    RequireGradOk([&] { return MseLoss(m->Call(args, {}), target); },
                  m->params().Trainable());
  };
  check("real[6] -> real[3]", {Value::OfTensor(Constant(Random({4, 6}, rng)))});
  check("real[6] -> bool[1]", {Value::OfTensor(Constant(Random({4, 6}, rng)))});
  check("real[6][6] -> real[4]", {Value::OfTensor(Constant(Random({3, 6, 6}, rng)))});
  check("list<real[3]> -> real[2]",
        {Value::OfList(Constant(Random({7, 3}, rng)), {0, 3, 4, 7})});
  check("list<real[2]> -> real[2]",
        {Value::OfList(Constant(Random({7, 2}, rng)), {0, 3, 3, 7})});
  check("real[2] -> (real[3] -> real[2])",
        {Value::OfTensor(Constant(Random({4, 2}, rng))),
         Value::OfTensor(Constant(Random({4, 3}, rng)))});
}

}  // namespace
}  // namespace neurosyn

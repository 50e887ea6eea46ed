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

#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "neurosyn/autodiff.h"
#include "neurosyn/gradcheck.h"
#include "neurosyn/params.h"

namespace neurosyn {
namespace {

Tensor Random(Shape shape, std::mt19937_64& rng, Real scale = 1) {
  Tensor t(std::move(shape));
  std::normal_distribution<Real> n(0, scale);
  for (long i = 0; i < t.size(); ++i) t[i] = n(rng);
  return t;
}

Var Param(Shape shape, std::mt19937_64& rng, Real scale = 1) {
  return Var(Random(std::move(shape), rng, scale), true);
}

void RequireGradOk(const std::function<Var()>& f, const std::vector<Var>& ps,
                   std::uint64_t seed = 3, int probes = 60) {
  GradCheckOptions o;
  o.seed = seed;
  o.probes = probes;
  GradCheckResult r = CheckGradients(f, ps, o);
  INFO("max rel error " << r.max_rel_error << ", kinks " << r.kinks);
  CHECK(r.passed);
}

TEST_CASE("forward identities") {
  std::mt19937_64 rng(1);
  Tensor eye(Shape{3, 3});
  for (int i = 0; i < 3; ++i) eye[i * 4] = 1;
  Tensor a = Random({3, 3}, rng);
  CHECK(MatMul(Constant(eye), Constant(a)).value() == a);
  CHECK(Sigmoid(Constant(Tensor::Scalar(0))).value().item() == 0.5);

  Tensor x = Random({2, 3, 5, 5}, rng);
  Tensor w(Shape{3, 3, 1, 1});
  for (int c = 0; c < 3; ++c) w[c * 3 + c] = 1;
  Var y = Conv2d(Constant(x), Constant(w), Constant(Tensor(Shape{3})));
  CHECK(y.value() == x);

  Var s = Softmax(Constant(Random({4, 7}, rng, 3)));
  for (int r = 0; r < 4; ++r) {
    Real sum = 0;
    for (int j = 0; j < 7; ++j) sum += s.value()[r * 7 + j];
    CHECK(std::abs(sum - 1) <= 1e-6);
  }
  Var sg = Sigmoid(Constant(Random({100}, rng, 10)));
  for (Real v : sg.value().values()) {
    CHECK(v > 0);
    CHECK(v < 1);
  }
}

TEST_CASE("shape errors name both shapes") {
  Var a = Constant(Tensor(Shape{2, 3}));
  Var b = Constant(Tensor(Shape{2, 3}));
  try {
    MatMul(a, b);
    FAIL("expected a shape error");
  } catch (const ShapeError& e) {
    std::string msg = e.what();
    CHECK(msg.find("[2, 3]") != std::string::npos);
    CHECK(msg.find("and [2, 3]") != std::string::npos);
  }
  CHECK_THROWS_AS(Add(a, Constant(Tensor(Shape{2}))), ShapeError);
  CHECK_NOTHROW(Add(a, Constant(Tensor(Shape{3}))));
}

TEST_CASE("scalar gradients") {
  Var x(Tensor::Scalar(3), true);
  Backward(Mul(x, x));
  CHECK(x.grad().item() == doctest::Approx(6));

  Var p(Tensor::Scalar(2), true), q(Tensor::Scalar(5), true);
  Backward(Mul(p, q));
  CHECK(p.grad().item() == doctest::Approx(5));
  CHECK(q.grad().item() == doctest::Approx(2));

  Var v(Tensor(Shape{2}), true);
  CHECK_THROWS_AS(Backward(Scale(v, 2)), ShapeError);

  // Unreachable parameters get zero.
  Var unused(Tensor(Shape{3}, 1), true);
  Var z(Tensor::Scalar(1), true);
  Backward(Square(z));
  CHECK(unused.grad() == Tensor(Shape{3}));
}

TEST_CASE("min routes to the first minimum") {
  Var x(Tensor(Shape{1, 4}, {2, 1, 1, 3}), true);
  Var m = MinAxis(x, 1);
  CHECK(m.value()[0] == 1);
  Backward(Sum(m));
  CHECK(x.grad() == Tensor(Shape{1, 4}, {0, 1, 0, 0}));
}

TEST_CASE("two-layer mlp matches finite differences") {
  std::mt19937_64 rng(11);
  Var w1 = Param({6, 8}, rng, 0.5), b1 = Param({8}, rng, 0.1);
  Var w2 = Param({8, 3}, rng, 0.5), b2 = Param({3}, rng, 0.1);
  Tensor x = Random({5, 6}, rng);
  Tensor t = Random({5, 3}, rng);
  auto loss = [&] {
    Var h = Tanh(Add(MatMul(Constant(x), w1), b1));
    return MseLoss(Add(MatMul(h, w2), b2), t);
  };
  GradCheckOptions o;
  o.probes = 100;
  GradCheckResult r = CheckGradients(loss, {w1, b1, w2, b2}, o);
  CHECK(r.passed);
  CHECK(r.max_rel_error <= 1e-3);
}

TEST_CASE("op gradients") {
  std::mt19937_64 rng(5);
  SUBCASE("conv2d and pooling") {
    Var x = Param({2, 2, 6, 6}, rng);
    Var w = Param({3, 2, 3, 3}, rng, 0.3), b = Param({3}, rng);
    Tensor t = Random({2, 3, 3, 3}, rng);
    RequireGradOk(
        [&] { return MseLoss(MaxPool2(Relu(Conv2d(x, w, b, 1, 1))), t); },
        {x, w, b});
    Tensor t2 = Random({2, 3, 2, 2}, rng);
    RequireGradOk([&] { return MseLoss(Conv2d(x, w, b, 2, 0), t2); }, {x, w, b});
  }
  SUBCASE("batchnorm") {
    Var x = Param({4, 3}, rng);
    Var g = Param({3}, rng), be = Param({3}, rng);
    Tensor t = Random({4, 3}, rng);
    BatchNormState st;
    RequireGradOk([&] { return MseLoss(BatchNorm(x, g, be, st, true), t); },
                  {x, g, be});
    BatchNormState st2;
    RequireGradOk([&] { return MseLoss(BatchNorm(x, g, be, st2, false), t); },
                  {x, g, be});
    Var x4 = Param({2, 3, 2, 2}, rng);
    Tensor t4 = Random({2, 3, 2, 2}, rng);
    BatchNormState st4;
    RequireGradOk([&] { return MseLoss(BatchNorm(x4, g, be, st4, true), t4); },
                  {x4, g, be});
  }
  SUBCASE("shape ops") {
    Var a = Param({2, 3}, rng), b = Param({2, 2}, rng);
    Tensor t = Random({2, 3}, rng);
    RequireGradOk(
        [&] {
          Var c = Concat({a, b}, 1);
          Var s = Slice(c, 1, 1, 3);
          return MseLoss(Reshape(s, {3, 2}), t.Reshaped({3, 2}));
        },
        {a, b});
    Tensor t0 = Random({4, 3}, rng);
    Var d = Param({2, 3}, rng);
    RequireGradOk([&] { return MseLoss(Concat({a, d}, 0), t0); }, {a, d});
  }
  SUBCASE("reductions and rows") {
    Var a = Param({4, 3}, rng);
    Var b = Param({4, 3}, rng);
    Tensor t = Random({3}, rng);
    RequireGradOk([&] { return MseLoss(MeanAxis(a, 0), t); }, {a});
    RequireGradOk([&] { return MseLoss(MinAxis(a, 0), t); }, {a});
    Tensor t5 = Random({5, 3}, rng);
    RequireGradOk([&] { return MseLoss(GatherRows(a, {3, 0, 0, 2, 1}), t5); },
                  {a});
    Tensor t4 = Random({4, 3}, rng);
    RequireGradOk([&] { return MseLoss(SelectRows({1, 0, 0, 1}, a, b), t4); },
                  {a, b});
  }
  SUBCASE("activations and losses") {
    Var a = Param({3, 4}, rng);
    Tensor onehot(Shape{3, 4});
    onehot[1] = onehot[6] = onehot[11] = 1;
    RequireGradOk([&] { return CrossEntropyLoss(Softmax(a), onehot); }, {a});
    Tensor bits(Shape{3, 4});
    for (long i = 0; i < bits.size(); ++i) bits[i] = i % 3 == 0;
    RequireGradOk([&] { return BceLoss(Sigmoid(a), bits); }, {a});
    RequireGradOk(
        [&] { return Mean(Mul(Exp(Scale(a, 0.5)), Log(AddScalar(Square(a), 1)))); },
        {a});
  }
}

TEST_CASE("sign-flip negative control is caught") {
  std::mt19937_64 rng(2);
  Var w = Param({4, 2}, rng);
  Tensor x = Random({3, 4}, rng), t = Random({3, 2}, rng);
  auto loss = [&] { return MseLoss(MatMul(Constant(x), w), t); };
  SetSignFlipBugForTesting(true);
  GradCheckResult bad = CheckGradients(loss, {w});
  SetSignFlipBugForTesting(false);
  CHECK_FALSE(bad.passed);
  CHECK(CheckGradients(loss, {w}).passed);
}

TEST_CASE("optimizers") {
  Var theta(Tensor::Scalar(1), true);
  Sgd sgd({theta}, 0.1);
  Backward(Scale(theta, 0.5));  // g = 0.5
  sgd.Step();
  CHECK(theta.value().item() == doctest::Approx(0.95));

  ParamStore frozen;
  Var f = frozen.Add("w", Tensor::Scalar(1));
  frozen.Freeze();
  Sgd frozen_sgd({f}, 0.1);
  Backward(Scale(Add(f, Var(Tensor::Scalar(0), true)), 3));
  frozen_sgd.Step();
  CHECK(f.value().item() == 1);
  CHECK_THROWS_AS(frozen.Set("w", Tensor::Scalar(2)), FrozenParameterError);

  Var a(Tensor::Scalar(0), true);
  Adam adam({a}, AdamConfig{0.01, 0.9, 0.999, 1e-8});
  Backward(a);  // g = 1
  adam.Step();
  // m_hat = v_hat = 1 after bias correction: the step is lr / (1 + eps).
  CHECK(a.value().item() == doctest::Approx(-0.01 / (1 + 1e-8)).epsilon(1e-12));
  CHECK_THROWS_AS(Sgd({a}, 0), std::invalid_argument);
}

TEST_CASE("determinism of forward, backward and update") {
  auto run = [] {
    std::mt19937_64 rng(42);
    Var w = Param({5, 4}, rng);
    Tensor x = Random({7, 5}, rng), t = Random({7, 4}, rng);
    Adam adam({w}, AdamConfig{});
    for (int i = 0; i < 5; ++i) {
      adam.ZeroGrad();
      Backward(MseLoss(Dropout(Tanh(MatMul(Constant(x), w)), 0.3, 9 + i, true), t));
      adam.Step();
    }
    return w.value();
  };
  CHECK(run() == run());
}

TEST_CASE("checkpoint round trip") {
  std::mt19937_64 rng(8);
  ParamStore store;
  store.Add("w", Random({3, 4}, rng));
  store.Add("b", Random({4}, rng));
  store.Freeze();
  auto dir = std::filesystem::temp_directory_path() / "neurosyn_ckpt_test";
  std::filesystem::remove_all(dir);
  WriteCheckpoint(store, dir);
  ParamStore back = ReadCheckpoint(dir);
  CHECK(back.frozen());
  CHECK(SerializeValues(back) == SerializeValues(store));
  CHECK(back.Get("w").shape() == Shape{3, 4});
  // Truncated payload.
  std::filesystem::resize_file(dir / "0.bin", 8);
  CHECK_THROWS_AS(ReadCheckpoint(dir), std::runtime_error);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace neurosyn

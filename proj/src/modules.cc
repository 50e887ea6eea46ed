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

#include "neurosyn/modules.h"

#include <algorithm>
#include <cmath>
#include <random>

namespace neurosyn {

const char* ToString(ModuleKind kind) {
  switch (kind) {
    case ModuleKind::kMlp: return "mlp";
    case ModuleKind::kCnn: return "cnn";
    case ModuleKind::kRnn: return "rnn";
    case ModuleKind::kFixed: return "fixed";
  }
  return "?";
}

const char* ToString(Activation activation) {
  switch (activation) {
    case Activation::kLinear: return "linear";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kSoftmax: return "softmax";
  }
  return "?";
}

ModuleKind ParseModuleKind(const std::string& s) {
  for (ModuleKind k : {ModuleKind::kMlp, ModuleKind::kCnn, ModuleKind::kRnn,
                       ModuleKind::kFixed}) {
    if (s == ToString(k)) return k;
  }
  throw std::invalid_argument("unknown module kind '" + s + "'");
}

Activation ParseActivation(const std::string& s) {
  for (Activation a : {Activation::kLinear, Activation::kSigmoid,
                       Activation::kSoftmax}) {
    if (s == ToString(a)) return a;
  }
  throw std::invalid_argument("unknown activation '" + s + "'");
}

namespace {

bool IsCurried(const Type& sig) {
  return sig.is_function() && sig.input().is_tensor() &&
         sig.output().is_function() && sig.output().input().is_tensor() &&
         sig.output().output().is_tensor();
}

std::string Inadmissible(const Type& sig, const char* why) {
  return "no module template for " + sig.ToString() + ": " + why;
}

}  // namespace

KindChoice SelectKind(const Type& sig, bool classification) {
  if (!sig.is_function()) {
    throw std::invalid_argument(Inadmissible(sig, "not a function type"));
  }
  const Type& in = sig.input();
  if (in.kind() == Type::Kind::kGraph) {
    throw std::invalid_argument(
        Inadmissible(sig, "graphs are consumed by combinators, not modules"));
  }
  if (IsCurried(sig)) {
    const TensorType& out = sig.output().output().tensor();
    return {ModuleKind::kMlp,
            out.atom == Atom::kBool ? Activation::kSigmoid : Activation::kLinear};
  }
  const Type& out = sig.output();
  if (!out.is_tensor()) {
    throw std::invalid_argument(Inadmissible(sig, "output must be a tensor"));
  }
  if (in.is_function()) {
    throw std::invalid_argument(Inadmissible(sig, "higher-order input"));
  }
  Activation act = out.tensor().atom == Atom::kBool ? Activation::kSigmoid
                   : classification && out.tensor().rank() == 1
                       ? Activation::kSoftmax
                       : Activation::kLinear;
  if (in.kind() == Type::Kind::kList) return {ModuleKind::kRnn, act};
  if (in.tensor().rank() >= 2) return {ModuleKind::kCnn, act};
  return {ModuleKind::kMlp, act};
}

bool IsModuleSignature(const Type& sig) {
  try {
    SelectKind(sig);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

const TensorType& NeuralModule::output_tensor() const {
  return IsCurried(signature_) ? signature_.output().output().tensor()
                               : signature_.output().tensor();
}

Var NeuralModule::Finish(const Var& logits) const {
  Var y = logits;
  switch (activation_) {
    case Activation::kSigmoid: y = Sigmoid(y); break;
    case Activation::kSoftmax: y = Softmax(y); break;
    case Activation::kLinear: break;
  }
  Shape s{logits.shape()[0]};
  for (int d : output_tensor().dims) s.push_back(d);
  return Reshape(y, s);
}

namespace {

class Init {
 public:
  explicit Init(std::uint64_t seed) : rng_(seed) {}
  Tensor Uniform(Shape shape, long fan_in) {
    Tensor t(std::move(shape));
    Real bound = 1 / std::sqrt(static_cast<Real>(std::max<long>(fan_in, 1)));
    std::uniform_real_distribution<Real> u(-bound, bound);
    for (long i = 0; i < t.size(); ++i) t[i] = u(rng_);
    return t;
  }

 private:
  std::mt19937_64 rng_;
};

Var Linear(const Var& x, const ParamStore& p, const std::string& prefix) {
  return Add(MatMul(x, p.Get(prefix + ".w")), p.Get(prefix + ".b"));
}

void AddLinear(ParamStore& p, Init& init, const std::string& prefix, int in,
               int out) {
  p.Add(prefix + ".w", init.Uniform({in, out}, in));
  p.Add(prefix + ".b", init.Uniform({out}, in));
}

int Elements(const TensorType& t) { return static_cast<int>(t.NumElements()); }

Var Flatten(const Var& x) {
  const Shape& s = x.shape();
  int f = static_cast<int>(NumElements(Shape(s.begin() + 1, s.end())));
  return Reshape(x, {s[0], f});
}

void RequireTensorArgs(const std::vector<Value>& args, std::size_t n,
                       const std::string& name) {
  if (args.size() != n) {
    throw ShapeError("module " + name + " expects " + std::to_string(n) +
                     " argument(s), got " + std::to_string(args.size()));
  }
  for (const Value& a : args) {
    if (!a.is_tensor()) throw ShapeError("module " + name + " expects tensor arguments");
  }
}

class Mlp : public NeuralModule {
 public:
  Mlp(std::string name, Type sig, Activation act, ModuleHyper hyper,
      std::uint64_t seed)
      : NeuralModule(std::move(name), std::move(sig), ModuleKind::kMlp, act,
                     std::move(hyper)) {
    curried_ = IsCurried(signature_);
    in_ = Elements(signature_.input().tensor());
    if (curried_) in_ += Elements(signature_.output().input().tensor());
    Init init(seed);
    AddLinear(params_, init, "fc1", in_, hyper_.mlp_hidden);
    AddLinear(params_, init, "fc2", hyper_.mlp_hidden, Elements(output_tensor()));
  }

  Var Call(const std::vector<Value>& args, const CallContext& ctx) const override {
    RequireTensorArgs(args, curried_ ? 2 : 1, name_);
    Var x = Flatten(args[0].data);
    if (curried_) x = Concat({x, Flatten(args[1].data)}, 1);
    if (x.shape()[1] != in_) {
      ThrowShapeMismatch(("module " + name_).c_str(), x.shape(), Shape{x.shape()[0], in_});
    }
    Var h = Relu(Linear(x, params_, "fc1"));
    if (hyper_.regularizers) h = Dropout(h, hyper_.dropout, ctx.seed, ctx.train && !frozen());
    return Finish(Linear(h, params_, "fc2"));
  }

 private:
  bool curried_ = false;
  int in_ = 0;
};

class Cnn : public NeuralModule {
 public:
  Cnn(std::string name, Type sig, Activation act, ModuleHyper hyper,
      std::uint64_t seed)
      : NeuralModule(std::move(name), std::move(sig), ModuleKind::kCnn, act,
                     std::move(hyper)) {
    const auto& dims = signature_.input().tensor().dims;
    if (dims.size() == 2) {
      in_shape_ = {1, dims[0], dims[1]};
    } else if (dims.size() == 3) {
      in_shape_ = dims;
    } else {
      throw std::invalid_argument(Inadmissible(signature_, "CNN needs rank 2 or 3"));
    }
    Init init(seed);
    int c = in_shape_[0], h = in_shape_[1], w = in_shape_[2];
    const int k = hyper_.cnn_kernel;
    for (std::size_t i = 0; i < hyper_.cnn_channels.size(); ++i) {
      int co = hyper_.cnn_channels[i];
      std::string p = "conv" + std::to_string(i + 1);
      params_.Add(p + ".w", init.Uniform({co, c, k, k}, static_cast<long>(c) * k * k));
      params_.Add(p + ".b", init.Uniform({co}, static_cast<long>(c) * k * k));
      if (hyper_.regularizers) {
        params_.Add("bn" + std::to_string(i + 1) + ".gamma", Tensor(Shape{co}, 1));
        params_.Add("bn" + std::to_string(i + 1) + ".beta", Tensor(Shape{co}, 0));
      }
      pool_.push_back(h >= 2 && w >= 2);
      if (pool_.back()) {
        h /= 2;
        w /= 2;
      }
      c = co;
    }
    features_ = c * h * w;
    AddLinear(params_, init, "head", features_, Elements(output_tensor()));
    bn_.resize(hyper_.cnn_channels.size());
  }

  Var Call(const std::vector<Value>& args, const CallContext& ctx) const override {
    RequireTensorArgs(args, 1, name_);
    int n = args[0].data.shape()[0];
    Var x = Reshape(args[0].data, {n, in_shape_[0], in_shape_[1], in_shape_[2]});
    const bool train = ctx.train && !frozen();
    for (std::size_t i = 0; i < hyper_.cnn_channels.size(); ++i) {
      std::string p = "conv" + std::to_string(i + 1);
      x = Conv2d(x, params_.Get(p + ".w"), params_.Get(p + ".b"), 1,
                 hyper_.cnn_kernel / 2);
      if (hyper_.regularizers) {
        std::string b = "bn" + std::to_string(i + 1);
        x = BatchNorm(x, params_.Get(b + ".gamma"), params_.Get(b + ".beta"),
                      bn_[i], train);
      }
      x = Relu(x);
      if (pool_[i]) x = MaxPool2(x);
    }
    return Finish(Linear(Reshape(x, {n, features_}), params_, "head"));
  }

 private:
  Shape in_shape_;
  std::vector<bool> pool_;
  int features_ = 0;
  // Running statistics; only touched in training mode on unfrozen modules,
  // which are owned by a single trainer.
  mutable std::vector<BatchNormState> bn_;
};

class Lstm : public NeuralModule {
 public:
  Lstm(std::string name, Type sig, Activation act, ModuleHyper hyper,
       std::uint64_t seed)
      : NeuralModule(std::move(name), std::move(sig), ModuleKind::kRnn, act,
                     std::move(hyper)) {
    in_ = Elements(signature_.input().tensor());
    const int h = hyper_.lstm_hidden;
    Init init(seed);
    params_.Add("lstm.wx", init.Uniform({in_, 4 * h}, h));
    params_.Add("lstm.wh", init.Uniform({h, 4 * h}, h));
    Tensor b = init.Uniform({4 * h}, h);
    for (int j = h; j < 2 * h; ++j) b[j] += 1;  // forget gate starts open
    params_.Add("lstm.b", std::move(b));
    AddLinear(params_, init, "head", h, Elements(output_tensor()));
    // Endomorphic real kernels (list<t> -> t) add the head to the first
    // window element, so stacked convolutions start near the identity.
    residual_ = output_tensor() == signature_.input().tensor() &&
                output_tensor().atom == Atom::kReal;
  }

  Var Call(const std::vector<Value>& args, const CallContext&) const override {
    if (args.size() != 1 || args[0].kind != Value::Kind::kList) {
      throw ShapeError("module " + name_ + " expects one list argument");
    }
    const Value& list = args[0];
    const int batch = list.batch();
    const int total = list.data.shape()[0];
    const int h = hyper_.lstm_hidden;
    Var hs = Constant(Tensor(Shape{batch, h}));
    Var cs = Constant(Tensor(Shape{batch, h}));
    int max_len = 0;
    for (int b = 0; b < batch; ++b) max_len = std::max(max_len, list.length(b));
    if (total > 0) {
      Var xw = MatMul(Reshape(list.data, {total, in_}), params_.Get("lstm.wx"));
      const Var& wh = params_.Get("lstm.wh");
      const Var& bias = params_.Get("lstm.b");
      std::vector<int> index(batch);
      std::vector<std::uint8_t> mask(batch);
      for (int t = 0; t < max_len; ++t) {
        bool all = true;
        for (int b = 0; b < batch; ++b) {
          int len = list.length(b);
          mask[b] = t < len;
          all = all && mask[b];
          index[b] = len == 0 ? 0 : list.offsets[b] + std::min(t, len - 1);
        }
        Var gates = Add(Add(GatherRows(xw, index), MatMul(hs, wh)), bias);
        Var i = Sigmoid(Slice(gates, 1, 0, h));
        Var f = Sigmoid(Slice(gates, 1, h, h));
        Var g = Tanh(Slice(gates, 1, 2 * h, h));
        Var o = Sigmoid(Slice(gates, 1, 3 * h, h));
        Var c2 = Add(Mul(f, cs), Mul(i, g));
        Var h2 = Mul(o, Tanh(c2));
        if (all) {
          cs = c2;
          hs = h2;
        } else {
          cs = SelectRows(mask, c2, cs);
          hs = SelectRows(mask, h2, hs);
        }
      }
    }
    Var out = Linear(hs, params_, "head");
    if (residual_ && total > 0) {
      std::vector<int> first(batch);
      std::vector<std::uint8_t> nonempty(batch);
      for (int b = 0; b < batch; ++b) {
        nonempty[b] = list.length(b) > 0;
        first[b] = nonempty[b] ? list.offsets[b] : 0;
      }
      Var x0 = GatherRows(Reshape(list.data, {total, in_}), first);
      out = Add(out, SelectRows(nonempty, x0, Constant(Tensor(Shape{batch, in_}))));
    }
    return Finish(out);
  }

 private:
  int in_ = 0;
  bool residual_ = false;
};

class MinPlusRelaxation : public NeuralModule {
 public:
  explicit MinPlusRelaxation(std::string name)
      : NeuralModule(std::move(name),
                     Type::Function(Type::List(TensorType{Atom::kReal, {2}}),
                                    Type::Tensor(Atom::kReal, {2})),
                     ModuleKind::kFixed, Activation::kLinear, ModuleHyper{}) {
    params_.Freeze();
  }

  Var Call(const std::vector<Value>& args, const CallContext&) const override {
    if (args.size() != 1 || args[0].kind != Value::Kind::kList) {
      throw ShapeError("module " + name_ + " expects one list argument");
    }
    const Value& list = args[0];
    const int batch = list.batch();
    const int total = list.data.shape()[0];
    int max_len = 0;
    bool uniform = true;
    for (int b = 0; b < batch; ++b) {
      int len = list.length(b);
      if (len == 0) throw ShapeError("relaxation of an empty neighborhood");
      if (b > 0 && len != list.length(0)) uniform = false;
      max_len = std::max(max_len, len);
    }
    Var w = Slice(list.data, 1, 0, 1);
    Var d = Slice(list.data, 1, 1, 1);
    Tensor not_self(Shape{total, 1}, 1);
    std::vector<int> self_rows(batch);
    for (int b = 0; b < batch; ++b) {
      not_self[list.offsets[b]] = 0;
      self_rows[b] = list.offsets[b];
    }
    Var cand = Add(d, Mul(w, Constant(std::move(not_self))));
    if (!uniform) {
      std::vector<int> index;
      for (int b = 0; b < batch; ++b) {
        for (int j = 0; j < max_len; ++j) {
          index.push_back(list.offsets[b] + std::min(j, list.length(b) - 1));
        }
      }
      cand = GatherRows(cand, index);
    }
    Var best = Reshape(MinAxis(Reshape(cand, {batch, max_len}), 1), {batch, 1});
    return Concat({GatherRows(w, self_rows), best}, 1);
  }
};

}  // namespace

ModulePtr Instantiate(ModuleKind kind, const Type& signature,
                      Activation activation, const ModuleHyper& hyper,
                      std::uint64_t seed, std::string name) {
  KindChoice admissible = SelectKind(signature);
  if (admissible.kind != kind && kind != ModuleKind::kFixed) {
    throw std::invalid_argument(Inadmissible(signature, "wrong template kind"));
  }
  switch (kind) {
    case ModuleKind::kMlp:
      return std::make_shared<Mlp>(std::move(name), signature, activation, hyper, seed);
    case ModuleKind::kCnn:
      return std::make_shared<Cnn>(std::move(name), signature, activation, hyper, seed);
    case ModuleKind::kRnn:
      return std::make_shared<Lstm>(std::move(name), signature, activation, hyper, seed);
    case ModuleKind::kFixed:
      break;
  }
  throw std::invalid_argument("fixed modules are built by name");
}

ModulePtr InstantiateFor(const Type& signature, bool classification,
                         const ModuleHyper& hyper, std::uint64_t seed,
                         std::string name) {
  KindChoice c = SelectKind(signature, classification);
  return Instantiate(c.kind, signature, c.activation, hyper, seed, std::move(name));
}

ModulePtr MakeMinPlusRelaxation(std::string name) {
  return std::make_shared<MinPlusRelaxation>(std::move(name));
}

ModulePtr Rebuild(const std::string& name, const Type& signature,
                  ModuleKind kind, Activation activation,
                  const ModuleHyper& hyper, const ParamStore& checkpoint) {
  if (kind == ModuleKind::kFixed) return MakeMinPlusRelaxation(name);
  ModulePtr m = Instantiate(kind, signature, activation, hyper, 0, name);
  const auto& want = m->params().entries();
  const auto& got = checkpoint.entries();
  if (want.size() != got.size()) {
    throw std::runtime_error("checkpoint for " + name + " has " +
                             std::to_string(got.size()) + " tensors, expected " +
                             std::to_string(want.size()));
  }
  std::vector<Tensor> values;
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (want[i].first != got[i].first) {
      throw std::runtime_error("checkpoint for " + name + " has tensor '" +
                               got[i].first + "', expected '" + want[i].first + "'");
    }
    values.push_back(got[i].second.value());
  }
  m->mutable_params().Restore(values);
  if (checkpoint.frozen()) m->Freeze();
  return m;
}

}  // namespace neurosyn

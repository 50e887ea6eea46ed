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

// Reverse-mode automatic differentiation over Tensor.
//
// Every op returns a Var. When some input requires a gradient the result
// records its parents and a backward closure, so the forward pass builds the
// tape implicitly; otherwise the result is a plain constant. A tape belongs
// to the thread that built it.

#ifndef NEUROSYN_AUTODIFF_H_
#define NEUROSYN_AUTODIFF_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "neurosyn/tensor.h"

namespace neurosyn {

struct Node {
  Tensor value;
  Tensor grad;  // empty until first accumulation
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  // Reads this node's grad and accumulates into the parents.
  std::function<void(Node&)> backward;
};

class Var {
 public:
  Var() = default;
  explicit Var(Tensor value, bool requires_grad = false);
  explicit Var(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  bool defined() const { return node_ != nullptr; }
  const Tensor& value() const { return node_->value; }
  Tensor& mutable_value() { return node_->value; }
  const Shape& shape() const { return node_->value.shape(); }
  bool requires_grad() const { return node_->requires_grad; }
  void set_requires_grad(bool r) { node_->requires_grad = r; }

  // Zero tensor of the value's shape if nothing was accumulated.
  Tensor grad() const;
  bool has_grad() const { return node_->grad.size() == node_->value.size(); }
  void ZeroGrad() { node_->grad = Tensor(); }

  const std::shared_ptr<Node>& node() const { return node_; }

 private:
  std::shared_ptr<Node> node_;
};

Var Constant(Tensor value);

// Accumulates d(root)/d(v) into every reachable v that requires a gradient.
// Throws ShapeError unless root holds exactly one element.
void Backward(const Var& root);

// Negative control for gradient checking: when set, the matmul backward
// pass flips the sign of the right operand's gradient.
void SetSignFlipBugForTesting(bool enabled);

// ---- Linear algebra and elementwise ops --------------------------------

// [n, k] x [k, m] -> [n, m].
Var MatMul(const Var& a, const Var& b);
// `b` must have a's shape or a suffix of it (broadcast over leading dims).
Var Add(const Var& a, const Var& b);
Var Sub(const Var& a, const Var& b);
Var Mul(const Var& a, const Var& b);
Var Scale(const Var& a, Real c);
Var AddScalar(const Var& a, Real c);

Var Relu(const Var& a);
Var Tanh(const Var& a);
Var Sigmoid(const Var& a);
Var Exp(const Var& a);
// Natural log of max(a, floor).
Var Log(const Var& a, Real floor = 1e-12);
Var Square(const Var& a);
// Softmax over the last axis.
Var Softmax(const Var& a);

// ---- Convolutional ops ---------------------------------------------------

// x: [B, C, H, W], w: [O, C, K, K], bias: [O] -> [B, O, H', W'].
Var Conv2d(const Var& x, const Var& w, const Var& bias, int stride = 1,
           int pad = 0);
// 2x2 max pooling with stride 2 (floor); ties go to the first element.
Var MaxPool2(const Var& x);

struct BatchNormState {
  Tensor running_mean;
  Tensor running_var;
  Real momentum = 0.1;
  Real eps = 1e-5;
};
// x: [B, F] or [B, C, H, W]; gamma, beta: [F] or [C]. Training mode
// normalizes with batch statistics and updates `state`.
Var BatchNorm(const Var& x, const Var& gamma, const Var& beta,
              BatchNormState& state, bool train);
// Inverted dropout with a mask drawn from `seed`; identity in eval mode.
Var Dropout(const Var& x, Real p, std::uint64_t seed, bool train);

// ---- Shape ops -------------------------------------------------------------

Var Concat(const std::vector<Var>& parts, int axis);
Var Slice(const Var& x, int axis, int start, int length);
Var Reshape(const Var& x, Shape shape);

// ---- Reductions --------------------------------------------------------------

Var Sum(const Var& x);   // -> scalar
Var Mean(const Var& x);  // -> scalar
Var SumAxis(const Var& x, int axis);
Var MeanAxis(const Var& x, int axis);
// Gradient flows to the first minimal element along the axis.
Var MinAxis(const Var& x, int axis);

// ---- Row ops (axis 0) ---------------------------------------------------

// out[i] = x[index[i]].
Var GatherRows(const Var& x, const std::vector<int>& index);
// out[i] = mask[i] ? a[i] : b[i].
Var SelectRows(const std::vector<std::uint8_t>& mask, const Var& a,
               const Var& b);

// ---- Losses (mean over elements or rows) -----------------------------

Var MseLoss(const Var& prediction, const Tensor& target);
// `probability` in (0, 1), clamped away from the ends.
Var BceLoss(const Var& probability, const Tensor& target);
// Rows of `probability` are distributions; `target` rows are one-hot.
Var CrossEntropyLoss(const Var& probability, const Tensor& target);

}  // namespace neurosyn

#endif  // NEUROSYN_AUTODIFF_H_

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

#include "neurosyn/autodiff.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <unordered_set>
#include <utility>

namespace neurosyn {
namespace {

std::atomic<bool> g_sign_flip_bug{false};

Tensor& GradBuffer(Node& n) {
  if (n.grad.size() != n.value.size() || n.grad.shape() != n.value.shape()) {
    n.grad = Tensor(n.value.shape());
  }
  return n.grad;
}

// Parent i's grad buffer, or nullptr when it needs no gradient.
Real* ParentGrad(Node& self, std::size_t i) {
  Node& p = *self.parents[i];
  if (!p.requires_grad) return nullptr;
  return GradBuffer(p).data();
}

Var MakeResult(Tensor value, std::vector<Var> inputs,
               std::function<void(Node&)> backward) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  bool any = false;
  for (const Var& v : inputs) any = any || v.requires_grad();
  if (any) {
    node->requires_grad = true;
    node->parents.reserve(inputs.size());
    for (const Var& v : inputs) node->parents.push_back(v.node());
    node->backward = std::move(backward);
  }
  return Var(std::move(node));
}

// Splits a shape at `axis` into (outer, extent, inner).
void AxisSplit(const Shape& s, int axis, long& outer, long& extent,
               long& inner) {
  if (axis < 0 || axis >= static_cast<int>(s.size())) {
    throw ShapeError("axis " + std::to_string(axis) + " out of range for " +
                     ShapeToString(s));
  }
  outer = 1;
  for (int i = 0; i < axis; ++i) outer *= s[i];
  extent = s[axis];
  inner = 1;
  for (std::size_t i = axis + 1; i < s.size(); ++i) inner *= s[i];
}

bool IsSuffix(const Shape& small, const Shape& big) {
  if (small.size() > big.size()) return false;
  return std::equal(small.rbegin(), small.rend(), big.rbegin());
}

enum class BinOp { kAdd, kSub, kMul };

Var Binary(const Var& a, const Var& b, BinOp op, const char* name) {
  const Shape& sa = a.shape();
  const Shape& sb = b.shape();
  bool a_big = sa.size() != sb.size() ? sa.size() > sb.size()
                                      : a.value().size() >= b.value().size();
  const Shape& big = a_big ? sa : sb;
  const Shape& small = a_big ? sb : sa;
  if (!IsSuffix(small, big)) ThrowShapeMismatch(name, sa, sb);
  long n = NumElements(big);
  long m = NumElements(small);
  Tensor out(big);
  const Real* x = a.value().data();
  const Real* y = b.value().data();
  Real* o = out.data();
  // Index into a / b for flat position i of the output.
  auto ia = [&](long i) { return a_big ? i : i % m; };
  auto ib = [&](long i) { return a_big ? i % m : i; };
  if (m == n) {
    for (long i = 0; i < n; ++i) {
      o[i] = op == BinOp::kAdd   ? x[i] + y[i]
             : op == BinOp::kSub ? x[i] - y[i]
                                 : x[i] * y[i];
    }
  } else {
    for (long i = 0; i < n; ++i) {
      Real u = x[ia(i)], v = y[ib(i)];
      o[i] = op == BinOp::kAdd ? u + v : op == BinOp::kSub ? u - v : u * v;
    }
  }
  return MakeResult(std::move(out), {a, b}, [op, n, m, a_big](Node& self) {
    const Real* g = self.grad.data();
    const Real* x = self.parents[0]->value.data();
    const Real* y = self.parents[1]->value.data();
    Real* ga = ParentGrad(self, 0);
    Real* gb = ParentGrad(self, 1);
    for (long i = 0; i < n; ++i) {
      long i_a = a_big ? i : i % m;
      long i_b = a_big ? i % m : i;
      switch (op) {
        case BinOp::kAdd:
          if (ga) ga[i_a] += g[i];
          if (gb) gb[i_b] += g[i];
          break;
        case BinOp::kSub:
          if (ga) ga[i_a] += g[i];
          if (gb) gb[i_b] -= g[i];
          break;
        case BinOp::kMul:
          if (ga) ga[i_a] += g[i] * y[i_b];
          if (gb) gb[i_b] += g[i] * x[i_a];
          break;
      }
    }
  });
}

// Elementwise unary op; `deriv` maps (x, y) to dy/dx.
template <typename F, typename D>
Var Unary(const Var& a, F f, D deriv) {
  Tensor out(a.shape());
  const Real* x = a.value().data();
  Real* y = out.data();
  long n = out.size();
  for (long i = 0; i < n; ++i) y[i] = f(x[i]);
  return MakeResult(std::move(out), {a}, [deriv, n](Node& self) {
    Real* ga = ParentGrad(self, 0);
    if (!ga) return;
    const Real* g = self.grad.data();
    const Real* x = self.parents[0]->value.data();
    const Real* y = self.value.data();
    for (long i = 0; i < n; ++i) ga[i] += g[i] * deriv(x[i], y[i]);
  });
}

}  // namespace

Var::Var(Tensor value, bool requires_grad) : node_(std::make_shared<Node>()) {
  node_->value = std::move(value);
  node_->requires_grad = requires_grad;
}

Tensor Var::grad() const {
  if (has_grad()) return node_->grad;
  return Tensor(node_->value.shape());
}

Var Constant(Tensor value) { return Var(std::move(value), false); }

void SetSignFlipBugForTesting(bool enabled) { g_sign_flip_bug = enabled; }

void Backward(const Var& root) {
  if (root.value().size() != 1) {
    throw ShapeError("backward needs a scalar root, got shape " +
                     ShapeToString(root.shape()));
  }
  if (!root.requires_grad()) return;
  // Iterative post-order DFS gives a topological order.
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, std::size_t>> stack;
  stack.emplace_back(root.node().get(), 0);
  visited.insert(root.node().get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* p = node->parents[next++].get();
      if (p->requires_grad && visited.insert(p).second) {
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  GradBuffer(*root.node())[0] += 1;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (!n->backward) continue;
    if (n->grad.size() == n->value.size()) n->backward(*n);
    n->grad = Tensor();  // interior grads are consumed
  }
}

Var MatMul(const Var& a, const Var& b) {
  const Shape& sa = a.shape();
  const Shape& sb = b.shape();
  if (sa.size() != 2 || sb.size() != 2 || sa[1] != sb[0]) {
    ThrowShapeMismatch("matmul", sa, sb);
  }
  int n = sa[0], k = sa[1], m = sb[1];
  Tensor out(Shape{n, m});
  const Real* x = a.value().data();
  const Real* y = b.value().data();
  Real* o = out.data();
  for (int i = 0; i < n; ++i) {
    Real* row = o + static_cast<long>(i) * m;
    for (int p = 0; p < k; ++p) {
      Real s = x[static_cast<long>(i) * k + p];
      if (s == 0) continue;
      const Real* yr = y + static_cast<long>(p) * m;
      for (int j = 0; j < m; ++j) row[j] += s * yr[j];
    }
  }
  return MakeResult(std::move(out), {a, b}, [n, k, m](Node& self) {
    const Real* g = self.grad.data();
    const Real* x = self.parents[0]->value.data();
    const Real* y = self.parents[1]->value.data();
    if (Real* ga = ParentGrad(self, 0)) {
      for (int i = 0; i < n; ++i) {
        const Real* gr = g + static_cast<long>(i) * m;
        for (int p = 0; p < k; ++p) {
          const Real* yr = y + static_cast<long>(p) * m;
          Real s = 0;
          for (int j = 0; j < m; ++j) s += gr[j] * yr[j];
          ga[static_cast<long>(i) * k + p] += s;
        }
      }
    }
    if (Real* gb = ParentGrad(self, 1)) {
      Real sign = g_sign_flip_bug ? -1 : 1;
      for (int i = 0; i < n; ++i) {
        const Real* gr = g + static_cast<long>(i) * m;
        for (int p = 0; p < k; ++p) {
          Real s = sign * x[static_cast<long>(i) * k + p];
          if (s == 0) continue;
          Real* gbr = gb + static_cast<long>(p) * m;
          for (int j = 0; j < m; ++j) gbr[j] += s * gr[j];
        }
      }
    }
  });
}

Var Add(const Var& a, const Var& b) { return Binary(a, b, BinOp::kAdd, "add"); }
Var Sub(const Var& a, const Var& b) { return Binary(a, b, BinOp::kSub, "sub"); }
Var Mul(const Var& a, const Var& b) { return Binary(a, b, BinOp::kMul, "mul"); }

Var Scale(const Var& a, Real c) {
  return Unary(a, [c](Real x) { return c * x; },
               [c](Real, Real) { return c; });
}

Var AddScalar(const Var& a, Real c) {
  return Unary(a, [c](Real x) { return x + c; },
               [](Real, Real) { return Real(1); });
}

Var Relu(const Var& a) {
  return Unary(a, [](Real x) { return x > 0 ? x : Real(0); },
               [](Real x, Real) { return x > 0 ? Real(1) : Real(0); });
}

Var Tanh(const Var& a) {
  return Unary(a, [](Real x) { return std::tanh(x); },
               [](Real, Real y) { return 1 - y * y; });
}

Var Sigmoid(const Var& a) {
  return Unary(
      a,
      [](Real x) {
        if (x >= 0) return 1 / (1 + std::exp(-x));
        Real e = std::exp(x);
        return e / (1 + e);
      },
      [](Real, Real y) { return y * (1 - y); });
}

Var Exp(const Var& a) {
  return Unary(a, [](Real x) { return std::exp(x); },
               [](Real, Real y) { return y; });
}

Var Log(const Var& a, Real floor) {
  return Unary(a, [floor](Real x) { return std::log(std::max(x, floor)); },
               [floor](Real x, Real) {
                 return x > floor ? 1 / x : Real(0);
               });
}

Var Square(const Var& a) {
  return Unary(a, [](Real x) { return x * x; },
               [](Real x, Real) { return 2 * x; });
}

Var Softmax(const Var& a) {
  if (a.value().rank() == 0) throw ShapeError("softmax of a scalar");
  long width = a.shape().back();
  long rows = width == 0 ? 0 : a.value().size() / width;
  Tensor out(a.shape());
  const Real* x = a.value().data();
  Real* y = out.data();
  for (long r = 0; r < rows; ++r) {
    const Real* xr = x + r * width;
    Real* yr = y + r * width;
    Real mx = *std::max_element(xr, xr + width);
    Real s = 0;
    for (long j = 0; j < width; ++j) s += (yr[j] = std::exp(xr[j] - mx));
    for (long j = 0; j < width; ++j) yr[j] /= s;
  }
  return MakeResult(std::move(out), {a}, [rows, width](Node& self) {
    Real* ga = ParentGrad(self, 0);
    if (!ga) return;
    const Real* g = self.grad.data();
    const Real* y = self.value.data();
    for (long r = 0; r < rows; ++r) {
      Real dot = 0;
      for (long j = 0; j < width; ++j) dot += g[r * width + j] * y[r * width + j];
      for (long j = 0; j < width; ++j) {
        ga[r * width + j] += y[r * width + j] * (g[r * width + j] - dot);
      }
    }
  });
}

Var Conv2d(const Var& x, const Var& w, const Var& bias, int stride, int pad) {
  const Shape& sx = x.shape();
  const Shape& sw = w.shape();
  if (sx.size() != 4 || sw.size() != 4 || sw[1] != sx[1] || sw[2] != sw[3]) {
    ThrowShapeMismatch("conv2d", sx, sw);
  }
  if (bias.shape() != Shape{sw[0]}) ThrowShapeMismatch("conv2d bias", sw, bias.shape());
  if (stride < 1 || pad < 0) throw ShapeError("conv2d: bad stride or padding");
  const int B = sx[0], C = sx[1], H = sx[2], W = sx[3];
  const int O = sw[0], K = sw[2];
  const int Ho = (H + 2 * pad - K) / stride + 1;
  const int Wo = (W + 2 * pad - K) / stride + 1;
  if (Ho < 1 || Wo < 1) ThrowShapeMismatch("conv2d", sx, sw);
  const long ckk = static_cast<long>(C) * K * K;
  const long hw = static_cast<long>(Ho) * Wo;
  // im2col for all samples: cols[b][ckk][hw].
  auto cols = std::make_shared<std::vector<Real>>(B * ckk * hw, Real(0));
  const Real* xd = x.value().data();
  for (int b = 0; b < B; ++b) {
    Real* cb = cols->data() + b * ckk * hw;
    for (int c = 0; c < C; ++c) {
      for (int ki = 0; ki < K; ++ki) {
        for (int kj = 0; kj < K; ++kj) {
          Real* row = cb + ((static_cast<long>(c) * K + ki) * K + kj) * hw;
          for (int oi = 0; oi < Ho; ++oi) {
            int ii = oi * stride - pad + ki;
            if (ii < 0 || ii >= H) continue;
            const Real* xr = xd + ((static_cast<long>(b) * C + c) * H + ii) * W;
            for (int oj = 0; oj < Wo; ++oj) {
              int jj = oj * stride - pad + kj;
              if (jj >= 0 && jj < W) row[oi * Wo + oj] = xr[jj];
            }
          }
        }
      }
    }
  }
  Tensor out(Shape{B, O, Ho, Wo});
  const Real* wd = w.value().data();
  const Real* bd = bias.value().data();
  for (int b = 0; b < B; ++b) {
    const Real* cb = cols->data() + b * ckk * hw;
    for (int o = 0; o < O; ++o) {
      Real* orow = out.data() + (static_cast<long>(b) * O + o) * hw;
      for (long p = 0; p < hw; ++p) orow[p] = bd[o];
      const Real* wr = wd + o * ckk;
      for (long q = 0; q < ckk; ++q) {
        Real s = wr[q];
        if (s == 0) continue;
        const Real* cr = cb + q * hw;
        for (long p = 0; p < hw; ++p) orow[p] += s * cr[p];
      }
    }
  }
  return MakeResult(
      std::move(out), {x, w, bias},
      [=](Node& self) {
        const Real* g = self.grad.data();
        const Real* wd = self.parents[1]->value.data();
        Real* gx = ParentGrad(self, 0);
        Real* gw = ParentGrad(self, 1);
        Real* gbias = ParentGrad(self, 2);
        std::vector<Real> dcols(gx ? ckk * hw : 0);
        for (int b = 0; b < B; ++b) {
          const Real* cb = cols->data() + b * ckk * hw;
          const Real* gb = g + static_cast<long>(b) * O * hw;
          if (gbias) {
            for (int o = 0; o < O; ++o) {
              Real s = 0;
              for (long p = 0; p < hw; ++p) s += gb[o * hw + p];
              gbias[o] += s;
            }
          }
          if (gw) {
            for (int o = 0; o < O; ++o) {
              const Real* gr = gb + o * hw;
              Real* gwr = gw + o * ckk;
              for (long q = 0; q < ckk; ++q) {
                const Real* cr = cb + q * hw;
                Real s = 0;
                for (long p = 0; p < hw; ++p) s += gr[p] * cr[p];
                gwr[q] += s;
              }
            }
          }
          if (gx) {
            std::fill(dcols.begin(), dcols.end(), Real(0));
            for (int o = 0; o < O; ++o) {
              const Real* gr = gb + o * hw;
              const Real* wr = wd + o * ckk;
              for (long q = 0; q < ckk; ++q) {
                Real s = wr[q];
                if (s == 0) continue;
                Real* dr = dcols.data() + q * hw;
                for (long p = 0; p < hw; ++p) dr[p] += s * gr[p];
              }
            }
            for (int c = 0; c < C; ++c) {
              for (int ki = 0; ki < K; ++ki) {
                for (int kj = 0; kj < K; ++kj) {
                  const Real* row =
                      dcols.data() + ((static_cast<long>(c) * K + ki) * K + kj) * hw;
                  for (int oi = 0; oi < Ho; ++oi) {
                    int ii = oi * stride - pad + ki;
                    if (ii < 0 || ii >= H) continue;
                    Real* xr = gx + ((static_cast<long>(b) * C + c) * H + ii) * W;
                    for (int oj = 0; oj < Wo; ++oj) {
                      int jj = oj * stride - pad + kj;
                      if (jj >= 0 && jj < W) xr[jj] += row[oi * Wo + oj];
                    }
                  }
                }
              }
            }
          }
        }
      });
}

Var MaxPool2(const Var& x) {
  const Shape& s = x.shape();
  if (s.size() != 4 || s[2] < 2 || s[3] < 2) {
    throw ShapeError("maxpool2 needs [B, C, H>=2, W>=2], got " + ShapeToString(s));
  }
  const int B = s[0], C = s[1], H = s[2], W = s[3];
  const int Ho = H / 2, Wo = W / 2;
  Tensor out(Shape{B, C, Ho, Wo});
  auto arg = std::make_shared<std::vector<long>>(out.size());
  const Real* xd = x.value().data();
  long k = 0;
  for (int bc = 0; bc < B * C; ++bc) {
    const Real* plane = xd + static_cast<long>(bc) * H * W;
    for (int i = 0; i < Ho; ++i) {
      for (int j = 0; j < Wo; ++j, ++k) {
        long best = (2L * i) * W + 2 * j;
        for (int di = 0; di < 2; ++di) {
          for (int dj = 0; dj < 2; ++dj) {
            long idx = (2L * i + di) * W + 2 * j + dj;
            if (plane[idx] > plane[best]) best = idx;
          }
        }
        out[k] = plane[best];
        (*arg)[k] = static_cast<long>(bc) * H * W + best;
      }
    }
  }
  return MakeResult(std::move(out), {x}, [arg](Node& self) {
    Real* gx = ParentGrad(self, 0);
    if (!gx) return;
    const Real* g = self.grad.data();
    for (std::size_t i = 0; i < arg->size(); ++i) gx[(*arg)[i]] += g[i];
  });
}

Var BatchNorm(const Var& x, const Var& gamma, const Var& beta,
              BatchNormState& state, bool train) {
  const Shape& s = x.shape();
  if (s.size() != 2 && s.size() != 4) {
    throw ShapeError("batchnorm needs [B, F] or [B, C, H, W], got " +
                     ShapeToString(s));
  }
  const long B = s[0], F = s[1];
  const long spatial = s.size() == 4 ? static_cast<long>(s[2]) * s[3] : 1;
  if (gamma.shape() != Shape{static_cast<int>(F)} || beta.shape() != gamma.shape()) {
    ThrowShapeMismatch("batchnorm", s, gamma.shape());
  }
  if (state.running_mean.size() != F) {
    state.running_mean = Tensor(Shape{static_cast<int>(F)}, 0);
    state.running_var = Tensor(Shape{static_cast<int>(F)}, 1);
  }
  const long count = B * spatial;
  auto at = [&](long b, long f, long p) { return (b * F + f) * spatial + p; };
  std::vector<Real> mean(F), inv_std(F);
  const Real* xd = x.value().data();
  for (long f = 0; f < F; ++f) {
    if (train) {
      if (count < 1) throw ShapeError("batchnorm on an empty batch");
      Real m = 0;
      for (long b = 0; b < B; ++b)
        for (long p = 0; p < spatial; ++p) m += xd[at(b, f, p)];
      m /= count;
      Real v = 0;
      for (long b = 0; b < B; ++b)
        for (long p = 0; p < spatial; ++p) {
          Real d = xd[at(b, f, p)] - m;
          v += d * d;
        }
      v /= count;
      mean[f] = m;
      inv_std[f] = 1 / std::sqrt(v + state.eps);
      state.running_mean[f] =
          (1 - state.momentum) * state.running_mean[f] + state.momentum * m;
      state.running_var[f] =
          (1 - state.momentum) * state.running_var[f] + state.momentum * v;
    } else {
      mean[f] = state.running_mean[f];
      inv_std[f] = 1 / std::sqrt(state.running_var[f] + state.eps);
    }
  }
  auto xhat = std::make_shared<std::vector<Real>>(x.value().size());
  Tensor out(s);
  const Real* gd = gamma.value().data();
  const Real* bd = beta.value().data();
  for (long b = 0; b < B; ++b)
    for (long f = 0; f < F; ++f)
      for (long p = 0; p < spatial; ++p) {
        long i = at(b, f, p);
        (*xhat)[i] = (xd[i] - mean[f]) * inv_std[f];
        out[i] = gd[f] * (*xhat)[i] + bd[f];
      }
  return MakeResult(
      std::move(out), {x, gamma, beta},
      [=](Node& self) {
        const Real* g = self.grad.data();
        const Real* gd = self.parents[1]->value.data();
        Real* gx = ParentGrad(self, 0);
        Real* gg = ParentGrad(self, 1);
        Real* gbeta = ParentGrad(self, 2);
        auto at = [&](long b, long f, long p) { return (b * F + f) * spatial + p; };
        for (long f = 0; f < F; ++f) {
          Real sum_g = 0, sum_gx = 0;
          for (long b = 0; b < B; ++b)
            for (long p = 0; p < spatial; ++p) {
              long i = at(b, f, p);
              sum_g += g[i];
              sum_gx += g[i] * (*xhat)[i];
            }
          if (gg) gg[f] += sum_gx;
          if (gbeta) gbeta[f] += sum_g;
          if (!gx) continue;
          for (long b = 0; b < B; ++b)
            for (long p = 0; p < spatial; ++p) {
              long i = at(b, f, p);
              if (train) {
                gx[i] += gd[f] * inv_std[f] *
                         (g[i] - sum_g / count - (*xhat)[i] * sum_gx / count);
              } else {
                gx[i] += gd[f] * inv_std[f] * g[i];
              }
            }
        }
      });
}

Var Dropout(const Var& x, Real p, std::uint64_t seed, bool train) {
  if (!train || p <= 0) return x;
  if (p >= 1) throw std::invalid_argument("dropout probability must be < 1");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(1 - p);
  Tensor mask(x.shape());
  Real scale = 1 / (1 - p);
  for (long i = 0; i < mask.size(); ++i) mask[i] = keep(rng) ? scale : 0;
  return Mul(x, Constant(std::move(mask)));
}

Var Concat(const std::vector<Var>& parts, int axis) {
  if (parts.empty()) throw ShapeError("concat of nothing");
  Shape s = parts[0].shape();
  if (axis < 0 || axis >= static_cast<int>(s.size())) {
    throw ShapeError("concat axis out of range for " + ShapeToString(s));
  }
  int total = 0;
  for (const Var& p : parts) {
    const Shape& q = p.shape();
    if (q.size() != s.size()) ThrowShapeMismatch("concat", s, q);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (static_cast<int>(i) != axis && q[i] != s[i]) ThrowShapeMismatch("concat", s, q);
    }
    total += q[axis];
  }
  long outer = 1, inner = 1;
  for (int i = 0; i < axis; ++i) outer *= s[i];
  for (std::size_t i = axis + 1; i < s.size(); ++i) inner *= s[i];
  s[axis] = total;
  Tensor out(s);
  std::vector<long> widths;
  for (const Var& p : parts) widths.push_back(p.shape()[axis] * inner);
  const long out_width = total * inner;
  long offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Real* src = parts[k].value().data();
    for (long o = 0; o < outer; ++o) {
      std::copy(src + o * widths[k], src + (o + 1) * widths[k],
                out.data() + o * out_width + offset);
    }
    offset += widths[k];
  }
  return MakeResult(std::move(out), parts, [widths, outer, out_width](Node& self) {
    const Real* g = self.grad.data();
    long offset = 0;
    for (std::size_t k = 0; k < widths.size(); ++k) {
      if (Real* gp = ParentGrad(self, k)) {
        for (long o = 0; o < outer; ++o) {
          const Real* src = g + o * out_width + offset;
          Real* dst = gp + o * widths[k];
          for (long j = 0; j < widths[k]; ++j) dst[j] += src[j];
        }
      }
      offset += widths[k];
    }
  });
}

Var Slice(const Var& x, int axis, int start, int length) {
  long outer, extent, inner;
  AxisSplit(x.shape(), axis, outer, extent, inner);
  if (start < 0 || length < 0 || start + length > extent) {
    throw ShapeError("slice [" + std::to_string(start) + ", " +
                     std::to_string(start + length) + ") out of range for " +
                     ShapeToString(x.shape()));
  }
  Shape s = x.shape();
  s[axis] = length;
  Tensor out(s);
  const Real* xd = x.value().data();
  for (long o = 0; o < outer; ++o) {
    std::copy(xd + (o * extent + start) * inner,
              xd + (o * extent + start + length) * inner,
              out.data() + o * length * inner);
  }
  return MakeResult(std::move(out), {x}, [=](Node& self) {
    Real* gx = ParentGrad(self, 0);
    if (!gx) return;
    const Real* g = self.grad.data();
    for (long o = 0; o < outer; ++o) {
      Real* dst = gx + (o * extent + start) * inner;
      const Real* src = g + o * length * inner;
      for (long j = 0; j < length * inner; ++j) dst[j] += src[j];
    }
  });
}

Var Reshape(const Var& x, Shape shape) {
  Tensor out = x.value().Reshaped(std::move(shape));
  return MakeResult(std::move(out), {x}, [](Node& self) {
    Real* gx = ParentGrad(self, 0);
    if (!gx) return;
    const Real* g = self.grad.data();
    for (long i = 0; i < self.grad.size(); ++i) gx[i] += g[i];
  });
}

Var Sum(const Var& x) {
  Real s = 0;
  for (Real v : x.value().values()) s += v;
  return MakeResult(Tensor::Scalar(s), {x}, [](Node& self) {
    Real* gx = ParentGrad(self, 0);
    if (!gx) return;
    Real g = self.grad[0];
    long n = self.parents[0]->value.size();
    for (long i = 0; i < n; ++i) gx[i] += g;
  });
}

Var Mean(const Var& x) {
  long n = x.value().size();
  if (n == 0) throw ShapeError("mean of an empty tensor");
  return Scale(Sum(x), Real(1) / n);
}

Var SumAxis(const Var& x, int axis) {
  long outer, extent, inner;
  AxisSplit(x.shape(), axis, outer, extent, inner);
  Shape s = x.shape();
  s.erase(s.begin() + axis);
  Tensor out(s);
  const Real* xd = x.value().data();
  for (long o = 0; o < outer; ++o)
    for (long e = 0; e < extent; ++e)
      for (long i = 0; i < inner; ++i)
        out[o * inner + i] += xd[(o * extent + e) * inner + i];
  return MakeResult(std::move(out), {x}, [=](Node& self) {
    Real* gx = ParentGrad(self, 0);
    if (!gx) return;
    const Real* g = self.grad.data();
    for (long o = 0; o < outer; ++o)
      for (long e = 0; e < extent; ++e)
        for (long i = 0; i < inner; ++i)
          gx[(o * extent + e) * inner + i] += g[o * inner + i];
  });
}

Var MeanAxis(const Var& x, int axis) {
  long outer, extent, inner;
  AxisSplit(x.shape(), axis, outer, extent, inner);
  if (extent == 0) throw ShapeError("mean over an empty axis");
  return Scale(SumAxis(x, axis), Real(1) / extent);
}

Var MinAxis(const Var& x, int axis) {
  long outer, extent, inner;
  AxisSplit(x.shape(), axis, outer, extent, inner);
  if (extent == 0) throw ShapeError("min over an empty axis");
  Shape s = x.shape();
  s.erase(s.begin() + axis);
  Tensor out(s);
  auto arg = std::make_shared<std::vector<long>>(out.size());
  const Real* xd = x.value().data();
  for (long o = 0; o < outer; ++o)
    for (long i = 0; i < inner; ++i) {
      long best = o * extent * inner + i;
      for (long e = 1; e < extent; ++e) {
        long idx = (o * extent + e) * inner + i;
        if (xd[idx] < xd[best]) best = idx;
      }
      out[o * inner + i] = xd[best];
      (*arg)[o * inner + i] = best;
    }
  return MakeResult(std::move(out), {x}, [arg](Node& self) {
    Real* gx = ParentGrad(self, 0);
    if (!gx) return;
    const Real* g = self.grad.data();
    for (std::size_t k = 0; k < arg->size(); ++k) gx[(*arg)[k]] += g[k];
  });
}

Var GatherRows(const Var& x, const std::vector<int>& index) {
  if (x.value().rank() == 0) throw ShapeError("gather on a scalar");
  const int n = x.shape()[0];
  const long r = RowSize(x.value());
  Shape s = x.shape();
  s[0] = static_cast<int>(index.size());
  Tensor out(s);
  const Real* xd = x.value().data();
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] < 0 || index[i] >= n) {
      throw ShapeError("gather index " + std::to_string(index[i]) +
                       " out of range for " + ShapeToString(x.shape()));
    }
    std::copy(xd + index[i] * r, xd + (index[i] + 1) * r, out.data() + i * r);
  }
  return MakeResult(std::move(out), {x}, [index, r](Node& self) {
    Real* gx = ParentGrad(self, 0);
    if (!gx) return;
    const Real* g = self.grad.data();
    for (std::size_t i = 0; i < index.size(); ++i) {
      Real* dst = gx + index[i] * r;
      const Real* src = g + i * r;
      for (long j = 0; j < r; ++j) dst[j] += src[j];
    }
  });
}

Var SelectRows(const std::vector<std::uint8_t>& mask, const Var& a,
               const Var& b) {
  if (a.shape() != b.shape()) ThrowShapeMismatch("select_rows", a.shape(), b.shape());
  if (a.value().rank() == 0 || static_cast<int>(mask.size()) != a.shape()[0]) {
    throw ShapeError("select_rows mask of length " + std::to_string(mask.size()) +
                     " for shape " + ShapeToString(a.shape()));
  }
  const long r = RowSize(a.value());
  Tensor out(a.shape());
  const Real* ad = a.value().data();
  const Real* bd = b.value().data();
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const Real* src = (mask[i] ? ad : bd) + i * r;
    std::copy(src, src + r, out.data() + i * r);
  }
  return MakeResult(std::move(out), {a, b}, [mask, r](Node& self) {
    const Real* g = self.grad.data();
    Real* ga = ParentGrad(self, 0);
    Real* gb = ParentGrad(self, 1);
    for (std::size_t i = 0; i < mask.size(); ++i) {
      Real* dst = mask[i] ? ga : gb;
      if (!dst) continue;
      dst += i * r;
      const Real* src = g + i * r;
      for (long j = 0; j < r; ++j) dst[j] += src[j];
    }
  });
}

Var MseLoss(const Var& prediction, const Tensor& target) {
  if (prediction.value().size() != target.size()) {
    ThrowShapeMismatch("mse", prediction.shape(), target.shape());
  }
  long n = target.size();
  if (n == 0) throw ShapeError("mse of an empty batch");
  const Real* p = prediction.value().data();
  Real s = 0;
  for (long i = 0; i < n; ++i) {
    Real d = p[i] - target[i];
    s += d * d;
  }
  return MakeResult(Tensor::Scalar(s / n), {prediction}, [target, n](Node& self) {
    Real* gp = ParentGrad(self, 0);
    if (!gp) return;
    const Real* p = self.parents[0]->value.data();
    Real g = self.grad[0] * 2 / n;
    for (long i = 0; i < n; ++i) gp[i] += g * (p[i] - target[i]);
  });
}

namespace {
constexpr Real kProbEps = 1e-7;
Real ClampProb(Real p) { return std::min(std::max(p, kProbEps), 1 - kProbEps); }
}  // namespace

Var BceLoss(const Var& probability, const Tensor& target) {
  if (probability.value().size() != target.size()) {
    ThrowShapeMismatch("bce", probability.shape(), target.shape());
  }
  long n = target.size();
  if (n == 0) throw ShapeError("bce of an empty batch");
  const Real* p = probability.value().data();
  Real s = 0;
  for (long i = 0; i < n; ++i) {
    Real q = ClampProb(p[i]);
    s -= target[i] * std::log(q) + (1 - target[i]) * std::log(1 - q);
  }
  return MakeResult(Tensor::Scalar(s / n), {probability}, [target, n](Node& self) {
    Real* gp = ParentGrad(self, 0);
    if (!gp) return;
    const Real* p = self.parents[0]->value.data();
    Real g = self.grad[0] / n;
    for (long i = 0; i < n; ++i) {
      Real q = ClampProb(p[i]);
      gp[i] += g * (q - target[i]) / (q * (1 - q));
    }
  });
}

Var CrossEntropyLoss(const Var& probability, const Tensor& target) {
  if (probability.shape() != target.shape() || probability.value().rank() < 1) {
    ThrowShapeMismatch("cross_entropy", probability.shape(), target.shape());
  }
  long width = target.shape().back();
  long rows = width == 0 ? 0 : target.size() / width;
  if (rows == 0) throw ShapeError("cross entropy of an empty batch");
  const Real* p = probability.value().data();
  Real s = 0;
  for (long i = 0; i < target.size(); ++i) {
    if (target[i] != 0) s -= target[i] * std::log(ClampProb(p[i]));
  }
  return MakeResult(Tensor::Scalar(s / rows), {probability}, [target, rows](Node& self) {
    Real* gp = ParentGrad(self, 0);
    if (!gp) return;
    const Real* p = self.parents[0]->value.data();
    Real g = self.grad[0] / rows;
    for (long i = 0; i < target.size(); ++i) {
      if (target[i] != 0 && p[i] > kProbEps) gp[i] -= g * target[i] / p[i];
    }
  });
}

}  // namespace neurosyn

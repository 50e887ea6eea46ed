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

#include "neurosyn/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <random>

namespace neurosyn {

GradCheckResult CheckGradients(const std::function<Var()>& loss,
                               const std::vector<Var>& params,
                               const GradCheckOptions& options) {
  GradCheckResult result;
  std::vector<Var> ps;
  long total = 0;
  for (const Var& p : params) {
    if (p.requires_grad() && p.value().size() > 0) {
      ps.push_back(p);
      total += p.value().size();
    }
  }
  if (ps.empty()) {
    result.passed = true;
    return result;
  }
  for (Var& p : ps) p.ZeroGrad();
  Var base = loss();
  const Real f0 = base.value().item();
  Backward(base);
  std::vector<Tensor> analytic;
  for (const Var& p : ps) analytic.push_back(p.grad());

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<long> pick(0, total - 1);
  const int max_draws = static_cast<int>(options.probes / (1 - options.max_kink_fraction)) + 1;
  int draws = 0;
  while (result.probes < options.probes && draws < max_draws) {
    ++draws;
    long flat = pick(rng);
    std::size_t k = 0;
    while (flat >= ps[k].value().size()) flat -= ps[k++].value().size();
    Tensor& w = ps[k].mutable_value();
    const Real theta = w[flat];
    const Real h = options.rel_step * std::max<Real>(1, std::abs(theta));
    w[flat] = theta + h;
    const Real fp = loss().value().item();
    w[flat] = theta - h;
    const Real fm = loss().value().item();
    w[flat] = theta;
    const Real central = (fp - fm) / (2 * h);
    const Real right = (fp - f0) / h;
    const Real left = (f0 - fm) / h;
    if (std::abs(right - left) >
        options.kink_ratio * std::max<Real>(1, std::abs(central))) {
      ++result.kinks;
      continue;
    }
    const Real a = analytic[k][flat];
    const Real denom = std::max({std::abs(a), std::abs(central), options.floor});
    result.max_rel_error = std::max(result.max_rel_error, std::abs(a - central) / denom);
    ++result.probes;
  }
  result.passed = result.probes == options.probes &&
                  result.max_rel_error <= options.tolerance;
  return result;
}

}  // namespace neurosyn

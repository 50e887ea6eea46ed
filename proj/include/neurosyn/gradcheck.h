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

// Central finite-difference checks of reverse-mode gradients.

#ifndef NEUROSYN_GRADCHECK_H_
#define NEUROSYN_GRADCHECK_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "neurosyn/autodiff.h"

namespace neurosyn {

struct GradCheckOptions {
  int probes = 100;
  // Step is rel_step * max(1, |theta|).
  Real rel_step = 1e-4;
  Real tolerance = 1e-3;
  // Denominator floor of the relative error.
  Real floor = 1e-5;
  // A probe whose one-sided slopes differ by more than
  // kink_ratio * max(1, |slope|) straddles a non-differentiable point
  // (relu, max-pool, min) and is redrawn; at most max_kink_fraction of the
  // draws may be discarded this way.
  Real kink_ratio = 1e-3;
  double max_kink_fraction = 0.2;
  std::uint64_t seed = 1;
};

struct GradCheckResult {
  Real max_rel_error = 0;
  int probes = 0;
  int kinks = 0;
  bool passed = false;
};

// `loss` rebuilds the forward pass from the current parameter values.
GradCheckResult CheckGradients(const std::function<Var()>& loss,
                               const std::vector<Var>& params,
                               const GradCheckOptions& options = {});

}  // namespace neurosyn

#endif  // NEUROSYN_GRADCHECK_H_

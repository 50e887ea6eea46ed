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

// Procedural glyph, list and grid tasks with exact targets.

#ifndef NEUROSYN_TASKGEN_H_
#define NEUROSYN_TASKGEN_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "neurosyn/types.h"
#include "neurosyn/value.h"

namespace neurosyn {

inline constexpr int kGlyphSide = 8;
inline constexpr int kColorSide = 12;
inline constexpr int kMaxPenalty = 4;
inline constexpr int kMaxGridSide = 5;
// Initial distance of every non-source node.
inline constexpr Real kMaxDistance = 2 * kMaxGridSide * kMaxGridSide * kMaxPenalty;

struct GlyphOptions {
  // Maximum translation per axis in pixels (0 or 1).
  int jitter = 1;
  Real noise = 0.1;
  // Probability that an axis is shifted at all.
  Real shift_prob = 0.3;
};

// Noise-free centered digit, [8, 8] with values in {0, 1}.
Tensor GlyphTemplate(int digit);
// [count, 8, 8] jittered noisy renderings of one class.
Tensor GenGlyphs(int digit, int count, std::uint64_t seed,
                 const GlyphOptions& options = {});
// [count, 3, 12, 12]: the same font over random contrasting colors.
Tensor GenColorGlyphs(int digit, int count, std::uint64_t seed,
                      const GlyphOptions& options = {});

struct Split {
  Value x;
  Value y;
  int size() const { return x.batch(); }
};

struct Task {
  std::string name;
  Type type;
  // Multi-class output with softmax/cross-entropy.
  bool classification = false;
  Split train, val, test;
};

// Train and val together get round(n * fraction) samples (8:1); the test
// split has n / 10 samples regardless of the fraction.
struct TaskSize {
  int n = 1000;
  Real fraction = 1;
};

Task MakeRecognizeTask(int digit, TaskSize size, std::uint64_t seed,
                       const GlyphOptions& glyph = {});
Task MakeClassifyTask(TaskSize size, std::uint64_t seed,
                      const GlyphOptions& glyph = {});
// Train/val lists have lengths 2..5, test lists 6..8.
Task MakeCountTask(int digit, TaskSize size, std::uint64_t seed,
                   const GlyphOptions& glyph = {});
Task MakeSumTask(TaskSize size, std::uint64_t seed,
                 const GlyphOptions& glyph = {});

enum class GridStyle { kGlyph, kColor };
// Train/val grids have sides 3..4, test grids side 5. Node k of a grid of
// side s is cell (k / s, k % s); the source is node 0.
Task MakeShortestPathTask(GridStyle style, TaskSize size, std::uint64_t seed,
                          const GlyphOptions& glyph = {});
// One grid node image -> (penalty, initial distance); a quarter of the
// nodes are sources. Same node encoding as the shortest-path grids.
Task MakeNodeRegressTask(GridStyle style, TaskSize size, std::uint64_t seed,
                         const GlyphOptions& glyph = {});

// Fixed point of d(u) <- min(d(u), min_{v in adj(u)} d(v) + w(v)) from
// d = 0 at the source and kMaxDistance elsewhere, |V| - 1 rounds.
std::vector<Real> BellmanFordOracle(const std::vector<Real>& penalties,
                                    const std::vector<std::vector<int>>& adjacency,
                                    int source);
std::vector<std::vector<int>> GridAdjacency(int side);

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void WriteDataset(const Task& task, const std::filesystem::path& dir);
Task ReadDataset(const std::filesystem::path& dir);

}  // namespace neurosyn

#endif  // NEUROSYN_TASKGEN_H_

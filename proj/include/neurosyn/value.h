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

// Batched runtime values.
//
// A tensor value of type t holds a [B, dims(t)...] Var: one row per sample.
// Lists and graphs flatten the elements of all B samples into one
// [total, dims(t)...] Var; sample b owns rows [offsets[b], offsets[b+1]).
// Graph adjacency is stored over those global row indices with each
// neighbor list sorted ascending.

#ifndef NEUROSYN_VALUE_H_
#define NEUROSYN_VALUE_H_

#include <memory>
#include <vector>

#include "neurosyn/autodiff.h"
#include "neurosyn/types.h"

namespace neurosyn {

struct GraphTopology {
  std::vector<int> row_start;  // size total + 1
  std::vector<int> neighbors;

  int degree(int node) const { return row_start[node + 1] - row_start[node]; }
};

struct Value {
  enum class Kind : unsigned char { kTensor, kList, kGraph };

  Kind kind = Kind::kTensor;
  Var data;
  std::vector<int> offsets;
  std::shared_ptr<const GraphTopology> topology;

  static Value OfTensor(Var data);
  static Value OfList(Var data, std::vector<int> offsets);
  static Value OfGraph(Var data, std::vector<int> offsets,
                       std::shared_ptr<const GraphTopology> topology);

  bool is_tensor() const { return kind == Kind::kTensor; }
  // Number of samples.
  int batch() const;
  int length(int sample) const { return offsets[sample + 1] - offsets[sample]; }
  // Element (or row) shape without the leading dimension.
  Shape element_shape() const;
  // Same structure, new element data.
  Value WithData(Var data) const;
};

// Throws ShapeError unless `v` conforms to the data type `t`.
void CheckConforms(const Value& v, const Type& t);

// Builds an undirected graph topology from per-sample edge lists given in
// sample-local node indices.
std::shared_ptr<const GraphTopology> MakeTopology(
    const std::vector<int>& offsets,
    const std::vector<std::vector<std::pair<int, int>>>& edges);

// Constant value holding only the listed samples, in the given order.
Value SelectSamples(const Value& v, const std::vector<int>& samples);

// Edges of one graph sample as local index pairs (a < b), ascending.
std::vector<std::pair<int, int>> LocalEdges(const Value& graph, int sample);

}  // namespace neurosyn

#endif  // NEUROSYN_VALUE_H_

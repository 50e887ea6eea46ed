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

#include "neurosyn/value.h"

#include <algorithm>

namespace neurosyn {

Value Value::OfTensor(Var data) {
  Value v;
  v.kind = Kind::kTensor;
  v.data = std::move(data);
  return v;
}

Value Value::OfList(Var data, std::vector<int> offsets) {
  Value v;
  v.kind = Kind::kList;
  v.data = std::move(data);
  v.offsets = std::move(offsets);
  return v;
}

Value Value::OfGraph(Var data, std::vector<int> offsets,
                     std::shared_ptr<const GraphTopology> topology) {
  Value v;
  v.kind = Kind::kGraph;
  v.data = std::move(data);
  v.offsets = std::move(offsets);
  v.topology = std::move(topology);
  return v;
}

int Value::batch() const {
  if (kind == Kind::kTensor) return data.shape().at(0);
  return static_cast<int>(offsets.size()) - 1;
}

Shape Value::element_shape() const {
  const Shape& s = data.shape();
  return Shape(s.begin() + 1, s.end());
}

Value Value::WithData(Var d) const {
  Value v = *this;
  v.data = std::move(d);
  return v;
}

void CheckConforms(const Value& v, const Type& t) {
  if (t.is_function()) throw ShapeError("function-typed value " + t.ToString());
  auto fail = [&](const std::string& why) {
    throw ShapeError("value does not conform to " + t.ToString() + ": " + why);
  };
  if (!v.data.defined() || v.data.value().rank() < 1) fail("missing data");
  Value::Kind want = t.kind() == Type::Kind::kTensor ? Value::Kind::kTensor
                     : t.kind() == Type::Kind::kList ? Value::Kind::kList
                                                     : Value::Kind::kGraph;
  if (v.kind != want) fail("wrong value kind");
  if (v.element_shape() != t.tensor().dims) {
    fail("element shape " + ShapeToString(v.element_shape()));
  }
  if (v.kind == Value::Kind::kTensor) return;
  if (v.offsets.empty() || v.offsets.front() != 0 ||
      v.offsets.back() != v.data.shape()[0] ||
      !std::is_sorted(v.offsets.begin(), v.offsets.end())) {
    fail("bad segment offsets");
  }
  if (v.kind == Value::Kind::kGraph) {
    const GraphTopology* g = v.topology.get();
    int total = v.data.shape()[0];
    if (!g || static_cast<int>(g->row_start.size()) != total + 1) fail("bad topology");
    for (int s = 0; s < v.batch(); ++s) {
      for (int u = v.offsets[s]; u < v.offsets[s + 1]; ++u) {
        for (int k = g->row_start[u]; k < g->row_start[u + 1]; ++k) {
          int n = g->neighbors[k];
          if (n < v.offsets[s] || n >= v.offsets[s + 1]) fail("edge leaves its sample");
        }
      }
    }
  }
}

std::shared_ptr<const GraphTopology> MakeTopology(
    const std::vector<int>& offsets,
    const std::vector<std::vector<std::pair<int, int>>>& edges) {
  int total = offsets.back();
  std::vector<std::vector<int>> adj(total);
  for (std::size_t s = 0; s < edges.size(); ++s) {
    int base = offsets[s];
    int n = offsets[s + 1] - base;
    for (auto [a, b] : edges[s]) {
      if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
        throw std::invalid_argument("edge index out of range");
      }
      adj[base + a].push_back(base + b);
      adj[base + b].push_back(base + a);
    }
  }
  auto g = std::make_shared<GraphTopology>();
  g->row_start.push_back(0);
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    g->neighbors.insert(g->neighbors.end(), a.begin(), a.end());
    g->row_start.push_back(static_cast<int>(g->neighbors.size()));
  }
  return g;
}

Value SelectSamples(const Value& v, const std::vector<int>& samples) {
  const Tensor& src = v.data.value();
  const long row = RowSize(src);
  std::vector<int> rows;
  std::vector<int> offsets{0};
  if (v.is_tensor()) {
    rows = samples;
  } else {
    for (int s : samples) {
      for (int r = v.offsets[s]; r < v.offsets[s + 1]; ++r) rows.push_back(r);
      offsets.push_back(static_cast<int>(rows.size()));
    }
  }
  Shape shape = src.shape();
  shape[0] = static_cast<int>(rows.size());
  Tensor out(shape);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy_n(src.data() + rows[i] * row, row, out.data() + i * row);
  }
  Var data = Constant(std::move(out));
  if (v.kind == Value::Kind::kTensor) return Value::OfTensor(std::move(data));
  if (v.kind == Value::Kind::kList) return Value::OfList(std::move(data), std::move(offsets));
  std::vector<std::vector<std::pair<int, int>>> edges;
  for (int s : samples) edges.push_back(LocalEdges(v, s));
  auto topo = MakeTopology(offsets, edges);
  return Value::OfGraph(std::move(data), std::move(offsets), std::move(topo));
}

std::vector<std::pair<int, int>> LocalEdges(const Value& graph, int sample) {
  const GraphTopology& g = *graph.topology;
  int base = graph.offsets[sample];
  std::vector<std::pair<int, int>> out;
  for (int u = base; u < graph.offsets[sample + 1]; ++u) {
    for (int k = g.row_start[u]; k < g.row_start[u + 1]; ++k) {
      if (g.neighbors[k] > u) out.emplace_back(u - base, g.neighbors[k] - base);
    }
  }
  return out;
}

}  // namespace neurosyn

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

#include "neurosyn/taskgen.h"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "json.hpp"
#include "neurosyn/seed.h"

namespace neurosyn {

namespace {

constexpr int kFontWidth = 5;
constexpr int kFontHeight = 6;

// clang-format off
constexpr const char* kFont[10][kFontHeight] = {
    {".###.", "#...#", "#...#", "#...#", "#...#", ".###."},
    {"..#..", ".##..", "..#..", "..#..", "..#..", ".###."},
    {".###.", "#...#", "...#.", "..#..", ".#...", "#####"},
    {"####.", "....#", ".###.", "....#", "....#", "####."},
    {"...#.", "..##.", ".#.#.", "#####", "...#.", "...#."},
    {"#####", "#....", "####.", "....#", "#...#", ".###."},
    {".###.", "#....", "####.", "#...#", "#...#", ".###."},
    {"#####", "....#", "...#.", "..#..", ".#...", ".#..."},
    {".###.", "#...#", ".###.", "#...#", "#...#", ".###."},
    {".###.", "#...#", "#...#", ".####", "....#", ".###."},
};
// clang-format on

void CheckDigit(int digit) {
  if (digit < 0 || digit > 9) {
    throw std::invalid_argument("digit class must be in 0..9, got " + std::to_string(digit));
  }
}

// Draws the font at (row0 + dy, col0 + dx) into a side x side plane.
void Stamp(Real* plane, int side, int digit, int row0, int col0, Real on) {
  for (int r = 0; r < kFontHeight; ++r) {
    for (int c = 0; c < kFontWidth; ++c) {
      if (kFont[digit][r][c] == '#') plane[(row0 + r) * side + col0 + c] = on;
    }
  }
}

class Renderer {
 public:
  Renderer(std::uint64_t seed, GlyphOptions options) : rng_(seed), options_(options) {
    if (options.jitter < 0 || options.jitter > 1) {
      throw std::invalid_argument("glyph jitter must be 0 or 1");
    }
    if (options.noise < 0) throw std::invalid_argument("glyph noise must be >= 0");
    if (!(options.shift_prob >= 0 && options.shift_prob <= 1)) {
      throw std::invalid_argument("glyph shift probability must be in [0, 1]");
    }
  }

  // 64 values.
  void Glyph(int digit, Real* out) {
    std::fill_n(out, kGlyphSide * kGlyphSide, Real(0));
    auto [dy, dx] = Jitter();
    Stamp(out, kGlyphSide, digit, 1 + dy, 1 + dx, 1);
    Noise(out, kGlyphSide * kGlyphSide);
  }

  // 3 * 144 values, channels first.
  void Color(int digit, Real* out) {
    std::uniform_real_distribution<Real> dark(0, 0.3), light(0.6, 1);
    Real bg[3], fg[3];
    bool inverted = std::bernoulli_distribution(0.5)(rng_);
    for (int c = 0; c < 3; ++c) {
      bg[c] = inverted ? light(rng_) : dark(rng_);
      fg[c] = inverted ? dark(rng_) : light(rng_);
    }
    auto [dy, dx] = Jitter();
    const int plane = kColorSide * kColorSide;
    std::vector<Real> mask(plane, 0);
    Stamp(mask.data(), kColorSide, digit, 3 + dy, 3 + dx, 1);
    for (int c = 0; c < 3; ++c) {
      for (int i = 0; i < plane; ++i) {
        out[c * plane + i] = mask[i] > 0 ? fg[c] : bg[c];
      }
    }
    Noise(out, 3 * plane);
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::pair<int, int> Jitter() {
    auto axis = [&] {
      if (options_.jitter == 0) return 0;
      if (!std::bernoulli_distribution(options_.shift_prob)(rng_)) return 0;
      return std::bernoulli_distribution(0.5)(rng_) ? 1 : -1;
    };
    int dy = axis();
    return {dy, axis()};
  }

  void Noise(Real* out, int n) {
    if (options_.noise == 0) return;
    std::normal_distribution<Real> gauss(0, options_.noise);
    for (int i = 0; i < n; ++i) out[i] += gauss(rng_);
  }

  std::mt19937_64 rng_;
  GlyphOptions options_;
};

struct SplitSizes {
  int train, val, test;
};

SplitSizes Sizes(const TaskSize& size) {
  if (size.n < 1) throw std::invalid_argument("dataset size must be positive");
  if (!(size.fraction > 0 && size.fraction <= 1)) {
    throw std::invalid_argument("data fraction must be in (0, 1]");
  }
  int fit = static_cast<int>(std::lround(size.n * size.fraction));
  int val = fit / 9;
  SplitSizes s{fit - val, val, std::max(1, size.n / 10)};
  if (s.train < 1 || s.val < 1) {
    throw std::invalid_argument("n * fraction = " + std::to_string(fit) +
                                " is too small for a train/val split");
  }
  return s;
}

Tensor Scalars(const std::vector<Real>& v) {
  return Tensor(Shape{static_cast<int>(v.size()), 1}, v);
}

// Half positives (rounded up), shuffled.
Split RecognizeSplit(int digit, int count, std::uint64_t seed, const GlyphOptions& g) {
  Renderer r(seed, g);
  std::vector<int> labels(count);
  for (int i = 0; i < count; ++i) labels[i] = i < (count + 1) / 2;
  std::shuffle(labels.begin(), labels.end(), r.rng());
  Tensor x(Shape{count, kGlyphSide, kGlyphSide});
  std::uniform_int_distribution<int> other(0, 8);
  std::vector<Real> y(count);
  for (int i = 0; i < count; ++i) {
    int cls = digit;
    if (!labels[i]) {
      cls = other(r.rng());
      if (cls >= digit) ++cls;
    }
    r.Glyph(cls, x.data() + i * kGlyphSide * kGlyphSide);
    y[i] = labels[i];
  }
  return {Value::OfTensor(Constant(std::move(x))), Value::OfTensor(Constant(Scalars(y)))};
}

Split ClassifySplit(int count, std::uint64_t seed, const GlyphOptions& g) {
  Renderer r(seed, g);
  Tensor x(Shape{count, kGlyphSide, kGlyphSide});
  Tensor y(Shape{count, 10});
  for (int i = 0; i < count; ++i) {
    int cls = i % 10;
    r.Glyph(cls, x.data() + i * kGlyphSide * kGlyphSide);
    y[i * 10 + cls] = 1;
  }
  return {Value::OfTensor(Constant(std::move(x))), Value::OfTensor(Constant(std::move(y)))};
}

// Lists of lengths [min_len, max_len]; element classes from `draw`.
template <typename Draw, typename Target>
Split ListSplit(int count, int min_len, int max_len, std::uint64_t seed,
                const GlyphOptions& g, Draw draw, Target target) {
  Renderer r(seed, g);
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::vector<int> offsets{0};
  std::vector<std::vector<int>> classes(count);
  for (int i = 0; i < count; ++i) {
    int k = len(r.rng());
    for (int j = 0; j < k; ++j) classes[i].push_back(draw(r.rng()));
    offsets.push_back(offsets.back() + k);
  }
  const int px = kGlyphSide * kGlyphSide;
  Tensor x(Shape{offsets.back(), kGlyphSide, kGlyphSide});
  std::vector<Real> y;
  for (int i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < classes[i].size(); ++j) {
      r.Glyph(classes[i][j], x.data() + (offsets[i] + j) * px);
    }
    y.push_back(target(classes[i]));
  }
  return {Value::OfList(Constant(std::move(x)), std::move(offsets)),
          Value::OfTensor(Constant(Scalars(y)))};
}

Split GridSplit(GridStyle style, int count, int min_side, int max_side,
                std::uint64_t seed, const GlyphOptions& g) {
  Renderer r(seed, g);
  std::uniform_int_distribution<int> side_dist(min_side, max_side);
  std::uniform_int_distribution<int> penalty(1, kMaxPenalty);
  std::vector<int> offsets{0};
  std::vector<int> sides;
  std::vector<std::vector<int>> penalties;
  for (int i = 0; i < count; ++i) {
    int side = side_dist(r.rng());
    sides.push_back(side);
    penalties.emplace_back();
    for (int k = 0; k < side * side; ++k) penalties.back().push_back(penalty(r.rng()));
    offsets.push_back(offsets.back() + side * side);
  }
  const bool color = style == GridStyle::kColor;
  const int side_px = color ? kColorSide : kGlyphSide;
  const int plane = side_px * side_px;
  const int channels = color ? 4 : 2;
  Tensor x(Shape{offsets.back(), channels, side_px, side_px});
  std::vector<Real> y;
  std::vector<std::vector<std::pair<int, int>>> edges;
  for (int i = 0; i < count; ++i) {
    auto adj = GridAdjacency(sides[i]);
    std::vector<Real> w(penalties[i].begin(), penalties[i].end());
    for (Real d : BellmanFordOracle(w, adj, 0)) y.push_back(d);
    edges.emplace_back();
    for (int u = 0; u < static_cast<int>(adj.size()); ++u) {
      for (int v : adj[u]) {
        if (v > u) edges.back().emplace_back(u, v);
      }
    }
    for (int k = 0; k < sides[i] * sides[i]; ++k) {
      Real* node = x.data() + static_cast<long>(offsets[i] + k) * channels * plane;
      if (color) {
        r.Color(penalties[i][k], node);
      } else {
        r.Glyph(penalties[i][k], node);
      }
      std::fill_n(node + (channels - 1) * plane, plane, Real(k == 0 ? 1 : 0));
    }
  }
  auto topo = MakeTopology(offsets, edges);
  Value xs = Value::OfGraph(Constant(std::move(x)), offsets, topo);
  Value ys = Value::OfGraph(Constant(Scalars(y)), offsets, topo);
  return {std::move(xs), std::move(ys)};
}

// Single grid nodes: the node image (with its source channel) against
// (penalty, initial distance).
Split NodeSplit(GridStyle style, int count, std::uint64_t seed, const GlyphOptions& g) {
  Renderer r(seed, g);
  std::uniform_int_distribution<int> penalty(1, kMaxPenalty);
  std::bernoulli_distribution source(0.25);
  const bool color = style == GridStyle::kColor;
  const int side_px = color ? kColorSide : kGlyphSide;
  const int plane = side_px * side_px;
  const int channels = color ? 4 : 2;
  Tensor x(Shape{count, channels, side_px, side_px});
  Tensor y(Shape{count, 2});
  for (int i = 0; i < count; ++i) {
    int w = penalty(r.rng());
    bool is_source = source(r.rng());
    Real* node = x.data() + static_cast<long>(i) * channels * plane;
    if (color) {
      r.Color(w, node);
    } else {
      r.Glyph(w, node);
    }
    std::fill_n(node + (channels - 1) * plane, plane, Real(is_source ? 1 : 0));
    y[2 * i] = w;
    y[2 * i + 1] = is_source ? 0 : kMaxDistance;
  }
  return {Value::OfTensor(Constant(std::move(x))), Value::OfTensor(Constant(std::move(y)))};
}

}  // namespace

Tensor GlyphTemplate(int digit) {
  CheckDigit(digit);
  Tensor t(Shape{kGlyphSide, kGlyphSide});
  Stamp(t.data(), kGlyphSide, digit, 1, 1, 1);
  return t;
}

Tensor GenGlyphs(int digit, int count, std::uint64_t seed, const GlyphOptions& options) {
  CheckDigit(digit);
  Renderer r(seed, options);
  Tensor out(Shape{count, kGlyphSide, kGlyphSide});
  for (int i = 0; i < count; ++i) r.Glyph(digit, out.data() + i * kGlyphSide * kGlyphSide);
  return out;
}

Tensor GenColorGlyphs(int digit, int count, std::uint64_t seed,
                      const GlyphOptions& options) {
  CheckDigit(digit);
  Renderer r(seed, options);
  const int n = 3 * kColorSide * kColorSide;
  Tensor out(Shape{count, 3, kColorSide, kColorSide});
  for (int i = 0; i < count; ++i) r.Color(digit, out.data() + i * n);
  return out;
}

Task MakeRecognizeTask(int digit, TaskSize size, std::uint64_t seed,
                       const GlyphOptions& glyph) {
  CheckDigit(digit);
  SplitSizes s = Sizes(size);
  Task t;
  t.name = "recognize_" + std::to_string(digit);
  t.type = ParseType("real[8][8] -> bool[1]");
  t.train = RecognizeSplit(digit, s.train, DeriveSeed(seed, 1), glyph);
  t.val = RecognizeSplit(digit, s.val, DeriveSeed(seed, 2), glyph);
  t.test = RecognizeSplit(digit, s.test, DeriveSeed(seed, 3), glyph);
  return t;
}

Task MakeClassifyTask(TaskSize size, std::uint64_t seed, const GlyphOptions& glyph) {
  SplitSizes s = Sizes(size);
  Task t;
  t.name = "classify";
  t.type = ParseType("real[8][8] -> real[10]");
  t.classification = true;
  t.train = ClassifySplit(s.train, DeriveSeed(seed, 1), glyph);
  t.val = ClassifySplit(s.val, DeriveSeed(seed, 2), glyph);
  t.test = ClassifySplit(s.test, DeriveSeed(seed, 3), glyph);
  return t;
}

Task MakeCountTask(int digit, TaskSize size, std::uint64_t seed, const GlyphOptions& glyph) {
  CheckDigit(digit);
  SplitSizes s = Sizes(size);
  auto draw = [digit](std::mt19937_64& rng) {
    if (std::bernoulli_distribution(0.5)(rng)) return digit;
    int c = std::uniform_int_distribution<int>(0, 8)(rng);
    return c >= digit ? c + 1 : c;
  };
  auto count = [digit](const std::vector<int>& cs) {
    return static_cast<Real>(std::count(cs.begin(), cs.end(), digit));
  };
  Task t;
  t.name = "count_" + std::to_string(digit);
  t.type = ParseType("list<real[8][8]> -> real[1]");
  t.train = ListSplit(s.train, 2, 5, DeriveSeed(seed, 1), glyph, draw, count);
  t.val = ListSplit(s.val, 2, 5, DeriveSeed(seed, 2), glyph, draw, count);
  t.test = ListSplit(s.test, 6, 8, DeriveSeed(seed, 3), glyph, draw, count);
  return t;
}

Task MakeSumTask(TaskSize size, std::uint64_t seed, const GlyphOptions& glyph) {
  SplitSizes s = Sizes(size);
  auto draw = [](std::mt19937_64& rng) { return std::uniform_int_distribution<int>(0, 9)(rng); };
  auto sum = [](const std::vector<int>& cs) {
    Real total = 0;
    for (int c : cs) total += c;
    return total;
  };
  Task t;
  t.name = "sum";
  t.type = ParseType("list<real[8][8]> -> real[1]");
  t.train = ListSplit(s.train, 2, 5, DeriveSeed(seed, 1), glyph, draw, sum);
  t.val = ListSplit(s.val, 2, 5, DeriveSeed(seed, 2), glyph, draw, sum);
  t.test = ListSplit(s.test, 6, 8, DeriveSeed(seed, 3), glyph, draw, sum);
  return t;
}

Task MakeShortestPathTask(GridStyle style, TaskSize size, std::uint64_t seed,
                          const GlyphOptions& glyph) {
  SplitSizes s = Sizes(size);
  Task t;
  if (style == GridStyle::kGlyph) {
    t.name = "shortest_path_glyph";
    t.type = ParseType("graph<real[2][8][8]> -> graph<real[1]>");
  } else {
    t.name = "shortest_path_color";
    t.type = ParseType("graph<real[4][12][12]> -> graph<real[1]>");
  }
  t.train = GridSplit(style, s.train, 3, 4, DeriveSeed(seed, 1), glyph);
  t.val = GridSplit(style, s.val, 3, 4, DeriveSeed(seed, 2), glyph);
  t.test = GridSplit(style, s.test, kMaxGridSide, kMaxGridSide, DeriveSeed(seed, 3), glyph);
  return t;
}

Task MakeNodeRegressTask(GridStyle style, TaskSize size, std::uint64_t seed,
                         const GlyphOptions& glyph) {
  SplitSizes s = Sizes(size);
  Task t;
  if (style == GridStyle::kGlyph) {
    t.name = "regress_glyph";
    t.type = ParseType("real[2][8][8] -> real[2]");
  } else {
    t.name = "regress_color";
    t.type = ParseType("real[4][12][12] -> real[2]");
  }
  t.train = NodeSplit(style, s.train, DeriveSeed(seed, 1), glyph);
  t.val = NodeSplit(style, s.val, DeriveSeed(seed, 2), glyph);
  t.test = NodeSplit(style, s.test, DeriveSeed(seed, 3), glyph);
  return t;
}

std::vector<std::vector<int>> GridAdjacency(int side) {
  std::vector<std::vector<int>> adj(side * side);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      int u = r * side + c;
      if (r > 0) adj[u].push_back(u - side);
      if (c > 0) adj[u].push_back(u - 1);
      if (c + 1 < side) adj[u].push_back(u + 1);
      if (r + 1 < side) adj[u].push_back(u + side);
    }
  }
  return adj;
}

std::vector<Real> BellmanFordOracle(const std::vector<Real>& penalties,
                                    const std::vector<std::vector<int>>& adjacency,
                                    int source) {
  const int n = static_cast<int>(penalties.size());
  std::vector<Real> d(n, kMaxDistance);
  d.at(source) = 0;
  for (int round = 0; round + 1 < n; ++round) {
    std::vector<Real> next = d;
    for (int u = 0; u < n; ++u) {
      for (int v : adjacency[u]) next[u] = std::min(next[u], d[v] + penalties[v]);
    }
    d = std::move(next);
  }
  return d;
}

namespace {

using nlohmann::json;

const char* DtypeName() { return sizeof(Real) == 8 ? "float64" : "float32"; }

std::uint32_t Crc(const Tensor& t) {
  const auto* bytes = reinterpret_cast<const Bytef*>(t.data());
  uLong crc = crc32(0L, Z_NULL, 0);
  std::size_t left = t.size() * sizeof(Real);
  while (left > 0) {
    uInt chunk = static_cast<uInt>(std::min<std::size_t>(left, 1u << 30));
    crc = crc32(crc, bytes, chunk);
    bytes += chunk;
    left -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

const char* KindName(Value::Kind k) {
  switch (k) {
    case Value::Kind::kTensor: return "tensor";
    case Value::Kind::kList: return "list";
    case Value::Kind::kGraph: return "graph";
  }
  return "?";
}

json WriteField(const Value& v, const std::filesystem::path& dir, const std::string& file) {
  const Tensor& t = v.data.value();
  std::ofstream out(dir / file, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(t.data()),
            static_cast<std::streamsize>(t.size() * sizeof(Real)));
  if (!out) throw DatasetError("cannot write " + (dir / file).string());
  json j = {{"kind", KindName(v.kind)},
            {"shape", t.shape()},
            {"file", file},
            {"crc32", Crc(t)}};
  if (!v.is_tensor()) j["offsets"] = v.offsets;
  if (v.kind == Value::Kind::kGraph) {
    json edges = json::array();
    for (int s = 0; s < v.batch(); ++s) {
      for (auto [a, b] : LocalEdges(v, s)) {
        edges.push_back({v.offsets[s] + a, v.offsets[s] + b});
      }
    }
    j["edges"] = std::move(edges);
  }
  return j;
}

Value ReadField(const json& j, const std::filesystem::path& dir) {
  std::string file = j.at("file").get<std::string>();
  Shape shape = j.at("shape").get<Shape>();
  Tensor t(shape);
  std::ifstream in(dir / file, std::ios::binary);
  if (!in) throw DatasetError("missing payload " + file);
  const std::size_t want = t.size() * sizeof(Real);
  in.seekg(0, std::ios::end);
  auto have = static_cast<std::size_t>(in.tellg());
  if (have != want) {
    throw DatasetError("payload " + file + " has " + std::to_string(have) +
                       " bytes, expected " + std::to_string(want));
  }
  in.seekg(0);
  in.read(reinterpret_cast<char*>(t.data()), static_cast<std::streamsize>(want));
  if (Crc(t) != j.at("crc32").get<std::uint32_t>()) {
    throw DatasetError("checksum mismatch for " + file);
  }
  std::string kind = j.at("kind").get<std::string>();
  Var data = Constant(std::move(t));
  if (kind == "tensor") return Value::OfTensor(std::move(data));
  std::vector<int> offsets = j.at("offsets").get<std::vector<int>>();
  if (kind == "list") return Value::OfList(std::move(data), std::move(offsets));
  if (kind != "graph") throw DatasetError("unknown field kind '" + kind + "'");
  std::vector<std::vector<std::pair<int, int>>> edges(offsets.size() - 1);
  std::size_t s = 0;
  for (const auto& e : j.at("edges")) {
    int a = e.at(0).get<int>(), b = e.at(1).get<int>();
    while (s + 1 < offsets.size() && a >= offsets[s + 1]) ++s;
    edges.at(s).emplace_back(a - offsets[s], b - offsets[s]);
  }
  auto topo = MakeTopology(offsets, edges);
  return Value::OfGraph(std::move(data), std::move(offsets), std::move(topo));
}

}  // namespace

void WriteDataset(const Task& task, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json manifest = {{"schema", "neurosyn.dataset/1"},
                   {"name", task.name},
                   {"type", task.type.ToString()},
                   {"classification", task.classification},
                   {"dtype", DtypeName()}};
  const std::pair<const char*, const Split*> splits[] = {
      {"train", &task.train}, {"val", &task.val}, {"test", &task.test}};
  for (auto [name, split] : splits) {
    std::string n = name;
    manifest["splits"][n] = {{"count", split->size()},
                             {"x", WriteField(split->x, dir, n + "_x.bin")},
                             {"y", WriteField(split->y, dir, n + "_y.bin")}};
  }
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  out << manifest.dump(2) << "\n";
  if (!out) throw DatasetError("cannot write " + (dir / "manifest.json").string());
}

Task ReadDataset(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw DatasetError("missing manifest.json in " + dir.string());
  try {
    json m = json::parse(in);
    if (m.at("schema") != "neurosyn.dataset/1") {
      throw DatasetError("unsupported dataset schema " + m.at("schema").dump());
    }
    if (m.at("dtype") != DtypeName()) {
      throw DatasetError("dataset dtype " + m.at("dtype").get<std::string>() +
                         " does not match this build (" + DtypeName() + ")");
    }
    Task t;
    t.name = m.at("name").get<std::string>();
    t.type = ParseType(m.at("type").get<std::string>());
    t.classification = m.at("classification").get<bool>();
    const std::pair<const char*, Split*> splits[] = {
        {"train", &t.train}, {"val", &t.val}, {"test", &t.test}};
    for (auto [name, split] : splits) {
      const json& s = m.at("splits").at(name);
      split->x = ReadField(s.at("x"), dir);
      split->y = ReadField(s.at("y"), dir);
      CheckConforms(split->x, t.type.input());
      CheckConforms(split->y, t.type.output());
      if (split->x.batch() != s.at("count").get<int>() ||
          split->y.batch() != split->x.batch()) {
        throw DatasetError(std::string("sample count mismatch in split ") + name);
      }
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError("corrupt dataset manifest: " + std::string(e.what()));
  } catch (const ShapeError& e) {
    throw DatasetError("dataset does not match its type: " + std::string(e.what()));
  } catch (const TypeSyntaxError& e) {
    throw DatasetError("bad type in dataset manifest: " + std::string(e.what()));
  }
}

}  // namespace neurosyn

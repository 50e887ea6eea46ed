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

#include "neurosyn/tensor.h"

#include <algorithm>

namespace neurosyn {

std::string ShapeToString(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

long NumElements(const Shape& shape) {
  long n = 1;
  for (int d : shape) {
    if (d < 0) throw ShapeError("negative dimension in " + ShapeToString(shape));
    n *= d;
  }
  return n;
}

void ThrowShapeMismatch(const char* op, const Shape& a, const Shape& b) {
  throw ShapeError(std::string(op) + ": incompatible shapes " +
                   ShapeToString(a) + " and " + ShapeToString(b));
}

Tensor::Tensor(Shape shape, Real fill)
    : shape_(std::move(shape)), data_(NumElements(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<Real> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (static_cast<long>(data_.size()) != NumElements(shape_)) {
    throw ShapeError("tensor data of length " + std::to_string(data_.size()) +
                     " does not match shape " + ShapeToString(shape_));
  }
}

Real Tensor::item() const {
  if (data_.size() != 1) {
    throw ShapeError("item() on tensor of shape " + ShapeToString(shape_));
  }
  return data_[0];
}

Tensor Tensor::Reshaped(Shape shape) const {
  if (NumElements(shape) != size()) ThrowShapeMismatch("reshape", shape_, shape);
  Tensor t;
  t.shape_ = std::move(shape);
  t.data_ = data_;
  return t;
}

void Tensor::Fill(Real v) { std::fill(data_.begin(), data_.end(), v); }

long RowSize(const Tensor& t) {
  if (t.rank() == 0) throw ShapeError("row access on a scalar tensor");
  return t.dim(0) == 0 ? NumElements(Shape(t.shape().begin() + 1, t.shape().end()))
                       : t.size() / t.dim(0);
}

}  // namespace neurosyn

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

// Dense row-major tensors.

#ifndef NEUROSYN_TENSOR_H_
#define NEUROSYN_TENSOR_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace neurosyn {

#ifdef NEUROSYN_FLOAT32
using Real = float;
#else
using Real = double;
#endif

using Shape = std::vector<int>;

std::string ShapeToString(const Shape& shape);
long NumElements(const Shape& shape);

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws ShapeError mentioning both shapes.
[[noreturn]] void ThrowShapeMismatch(const char* op, const Shape& a,
                                     const Shape& b);

class Tensor {
 public:
  Tensor() : shape_{0} {}
  explicit Tensor(Shape shape, Real fill = 0);
  Tensor(Shape shape, std::vector<Real> data);
  static Tensor Scalar(Real v) { return Tensor(Shape{}, {v}); }

  const Shape& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int dim(int axis) const { return shape_.at(axis); }
  long size() const { return static_cast<long>(data_.size()); }

  Real* data() { return data_.data(); }
  const Real* data() const { return data_.data(); }
  std::vector<Real>& values() { return data_; }
  const std::vector<Real>& values() const { return data_; }
  Real& operator[](long i) { return data_[i]; }
  Real operator[](long i) const { return data_[i]; }

  // The single element of a size-1 tensor.
  Real item() const;

  Tensor Reshaped(Shape shape) const;
  void Fill(Real v);

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<Real> data_;
};

// Rows are slices along axis 0.
long RowSize(const Tensor& t);

}  // namespace neurosyn

#endif  // NEUROSYN_TENSOR_H_

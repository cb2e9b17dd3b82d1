// interp/autodiff/tensor.h

// Copyright 2026 The interp Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef INTERP_AUTODIFF_TENSOR_H_
#define INTERP_AUTODIFF_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace interp::ad {

using Shape = std::vector<std::size_t>;

std::string ShapeToString(const Shape& shape);
std::size_t NumElements(const Shape& shape);

/// Dense row-major array of doubles. A scalar has shape {1}.
class Tensor {
 public:
  Tensor() : shape_{1}, data_(1, 0.0) {}
  /// Throws ShapeError unless product(shape) == data.size() and every
  /// dimension is positive.
  Tensor(Shape shape, std::vector<double> data);

  static Tensor Zeros(Shape shape);
  static Tensor Filled(Shape shape, double value);
  static Tensor Scalar(double value) { return Tensor({1}, {value}); }
  static Tensor Vector(std::vector<double> values);
  static Tensor Matrix(std::size_t rows, std::size_t cols,
                       std::vector<double> values);
  static Tensor FromRows(std::initializer_list<std::initializer_list<double>> rows);
  static Tensor Identity(std::size_t n);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  bool is_scalar() const { return data_.size() == 1; }

  /// Matrix view; rank-1 tensors count as a single row.
  std::size_t rows() const;
  std::size_t cols() const;

  std::span<const double> data() const { return data_; }
  std::span<double> mutable_data() { return data_; }
  const std::vector<double>& values() const { return data_; }

  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }
  double& at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  double item() const;

  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * cols(), cols());
  }
  std::span<double> mutable_row(std::size_t r) {
    return std::span<double>(data_).subspan(r * cols(), cols());
  }

  bool AllFinite() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

}  // namespace interp::ad

#endif  // INTERP_AUTODIFF_TENSOR_H_

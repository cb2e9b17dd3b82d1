// src/autodiff/tensor.cc

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

#include "interp/autodiff/tensor.h"

#include <cmath>
#include <sstream>

#include "interp/errors.h"

namespace interp::ad {

std::string ShapeToString(const Shape& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << ", ";
    out << shape[i];
  }
  out << ']';
  return out.str();
}

std::size_t NumElements(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_.empty()) throw ShapeError("tensor shape must have rank >= 1");
  for (std::size_t d : shape_) {
    if (d == 0) {
      throw ShapeError("tensor dimensions must be positive, got " +
                       ShapeToString(shape_));
    }
  }
  if (NumElements(shape_) != data_.size()) {
    throw ShapeError("shape " + ShapeToString(shape_) + " does not hold " +
                     std::to_string(data_.size()) + " values");
  }
}

Tensor Tensor::Zeros(Shape shape) { return Filled(std::move(shape), 0.0); }

Tensor Tensor::Filled(Shape shape, double value) {
  const std::size_t n = NumElements(shape);
  return Tensor(std::move(shape), std::vector<double>(n, value));
}

Tensor Tensor::Vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor({n}, std::move(values));
}

Tensor Tensor::Matrix(std::size_t rows, std::size_t cols,
                      std::vector<double> values) {
  return Tensor({rows, cols}, std::move(values));
}

Tensor Tensor::FromRows(
    std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<double> values;
  std::size_t cols = 0;
  for (const auto& r : rows) {
    if (cols == 0) cols = r.size();
    if (r.size() != cols) throw ShapeError("ragged rows in FromRows");
    values.insert(values.end(), r.begin(), r.end());
  }
  return Tensor({rows.size(), cols}, std::move(values));
}

Tensor Tensor::Identity(std::size_t n) {
  Tensor t = Zeros({n, n});
  for (std::size_t i = 0; i < n; ++i) t.at(i, i) = 1.0;
  return t;
}

std::size_t Tensor::rows() const {
  if (shape_.size() == 1) return 1;
  if (shape_.size() == 2) return shape_[0];
  throw ShapeError("expected a matrix, got " + ShapeToString(shape_));
}

std::size_t Tensor::cols() const {
  if (shape_.size() == 1) return shape_[0];
  if (shape_.size() == 2) return shape_[1];
  throw ShapeError("expected a matrix, got " + ShapeToString(shape_));
}

double Tensor::item() const {
  if (data_.size() != 1) {
    throw ShapeError("item() on non-scalar tensor " + ShapeToString(shape_));
  }
  return data_[0];
}

bool Tensor::AllFinite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace interp::ad

// interp/autodiff/ops.h

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

#ifndef INTERP_AUTODIFF_OPS_H_
#define INTERP_AUTODIFF_OPS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "interp/autodiff/tape.h"

// Differentiable operations. All inputs must live on the same tape.
// Elementwise ops take equal shapes, or a scalar on either side; there is no
// other broadcasting. Shape problems raise ShapeError naming both shapes.

namespace interp::ad {

Var Add(const Var& a, const Var& b);
Var Sub(const Var& a, const Var& b);
Var Mul(const Var& a, const Var& b);
Var MatMul(const Var& a, const Var& b);
Var Relu(const Var& x);
Var Tanh(const Var& x);
/// Mean of all elements, shape {1}.
Var Mean(const Var& x);
/// Column-wise mean of a matrix, shape {1, cols}.
Var MeanRows(const Var& x);
/// Sum of all elements, shape {1}.
Var Sum(const Var& x);
/// Concatenates matrices along axis 0 (rows) or 1 (columns).
Var Concat(std::span<const Var> parts, std::size_t axis);
Var Scale(const Var& x, double factor);
Var Transpose(const Var& x);
/// Max-subtracted softmax. Rank-1 inputs accept axis 0 only; matrices accept
/// axis 0 or 1.
Var Softmax(const Var& logits, std::size_t axis);
/// -log(probs[target]) for a single probability row. Probabilities below the
/// smallest normal double are clamped so the result stays finite.
Var CrossEntropy(const Var& probs, std::size_t target);
/// Stacks the selected rows; backward scatter-adds into the source rows.
Var GatherRows(const Var& matrix, std::span<const std::size_t> indices);

namespace internal {
// Applies the local derivative of `node` to `upstream` and hands each
// input's contribution to `accumulate`.
void Propagate(const Tape& tape, const Node& node, const Tensor& upstream,
               const std::function<void(NodeId, Tensor)>& accumulate);
}  // namespace internal

}  // namespace interp::ad

#endif  // INTERP_AUTODIFF_OPS_H_

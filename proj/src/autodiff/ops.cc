// src/autodiff/ops.cc

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

#include "interp/autodiff/ops.h"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "interp/errors.h"

namespace interp::ad {
namespace {

Tape& SameTape(const Var& a, const Var& b) {
  if (&a.tape() != &b.tape()) {
    throw ContractError("operands live on different tapes");
  }
  return a.tape();
}

[[noreturn]] void Mismatch(const char* op, const Shape& a, const Shape& b) {
  throw ShapeError(std::string(op) + ": shapes " + ShapeToString(a) + " and " +
                   ShapeToString(b) + " do not conform");
}

void RequireMatrix(const char* op, const Tensor& t) {
  if (t.rank() != 2) {
    throw ShapeError(std::string(op) + ": expected a matrix, got " +
                     ShapeToString(t.shape()));
  }
}

// Output shape of an elementwise op with scalar-only broadcasting.
Shape ElementwiseShape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() == b.shape()) return a.shape();
  if (b.is_scalar()) return a.shape();
  if (a.is_scalar()) return b.shape();
  Mismatch(op, a.shape(), b.shape());
}

template <typename F>
Tensor Elementwise(const Tensor& a, const Tensor& b, const Shape& shape, F f) {
  Tensor out = Tensor::Zeros(shape);
  const bool a_scalar = a.size() != out.size();
  const bool b_scalar = b.size() != out.size();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = f(a[a_scalar ? 0 : i], b[b_scalar ? 0 : i]);
  }
  return out;
}

template <typename F>
Tensor Map(const Tensor& x, F f) {
  Tensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(x[i]);
  return out;
}

Var Binary(OpKind kind, const char* name, const Var& a, const Var& b,
           double (*f)(double, double)) {
  Tape& tape = SameTape(a, b);
  Node n;
  n.kind = kind;
  n.inputs = {a.id(), b.id()};
  n.value = Elementwise(a.value(), b.value(),
                        ElementwiseShape(name, a.value(), b.value()), f);
  return tape.Record(std::move(n));
}

Var Unary(OpKind kind, const Var& x, Tensor value) {
  Node n;
  n.kind = kind;
  n.inputs = {x.id()};
  n.value = std::move(value);
  return x.tape().Record(std::move(n));
}

Tensor MatMulRaw(const Tensor& a, bool ta, const Tensor& b, bool tb) {
  const std::size_t m = ta ? a.cols() : a.rows();
  const std::size_t k = ta ? a.rows() : a.cols();
  const std::size_t k2 = tb ? b.cols() : b.rows();
  const std::size_t n = tb ? b.rows() : b.cols();
  if (k != k2) Mismatch("matmul", a.shape(), b.shape());
  Tensor out = Tensor::Zeros({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double av = ta ? a.at(p, i) : a.at(i, p);
      if (av == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        out.at(i, j) += av * (tb ? b.at(j, p) : b.at(p, j));
      }
    }
  }
  return out;
}

// Reduces a gradient to the shape of a (possibly scalar-broadcast) input.
Tensor ReduceTo(const Tensor& grad, const Tensor& input) {
  if (grad.size() == input.size()) return Tensor(input.shape(), grad.values());
  double total = 0.0;
  for (double g : grad.data()) total += g;
  return Tensor(input.shape(), {total});
}

// Calls f(offset, stride, count) for each slice along `axis`.
template <typename F>
void ForEachSlice(const Tensor& t, std::size_t axis, F f) {
  if (t.rank() == 1) {
    f(0, 1, t.size());
    return;
  }
  const std::size_t rows = t.rows(), cols = t.cols();
  if (axis == 1) {
    for (std::size_t r = 0; r < rows; ++r) f(r * cols, 1, cols);
  } else {
    for (std::size_t c = 0; c < cols; ++c) f(c, cols, rows);
  }
}

}  // namespace

Var Add(const Var& a, const Var& b) {
  return Binary(OpKind::kAdd, "add", a, b,
                [](double x, double y) { return x + y; });
}

Var Sub(const Var& a, const Var& b) {
  return Binary(OpKind::kSub, "sub", a, b,
                [](double x, double y) { return x - y; });
}

Var Mul(const Var& a, const Var& b) {
  return Binary(OpKind::kMul, "mul", a, b,
                [](double x, double y) { return x * y; });
}

Var MatMul(const Var& a, const Var& b) {
  Tape& tape = SameTape(a, b);
  if (a.value().rank() != 2 || b.value().rank() != 2) {
    Mismatch("matmul", a.shape(), b.shape());
  }
  Node n;
  n.kind = OpKind::kMatMul;
  n.inputs = {a.id(), b.id()};
  n.value = MatMulRaw(a.value(), false, b.value(), false);
  return tape.Record(std::move(n));
}

Var Relu(const Var& x) {
  return Unary(OpKind::kRelu, x,
               Map(x.value(), [](double v) { return v > 0.0 ? v : 0.0; }));
}

Var Tanh(const Var& x) {
  return Unary(OpKind::kTanh, x,
               Map(x.value(), [](double v) { return std::tanh(v); }));
}

Var Mean(const Var& x) {
  double total = 0.0;
  for (double v : x.value().data()) total += v;
  return Unary(OpKind::kMean, x,
               Tensor::Scalar(total / static_cast<double>(x.value().size())));
}

Var MeanRows(const Var& x) {
  const Tensor& v = x.value();
  RequireMatrix("mean_rows", v);
  Tensor out = Tensor::Zeros({1, v.cols()});
  for (std::size_t r = 0; r < v.rows(); ++r) {
    for (std::size_t c = 0; c < v.cols(); ++c) out[c] += v.at(r, c);
  }
  const double inv = 1.0 / static_cast<double>(v.rows());
  for (std::size_t c = 0; c < v.cols(); ++c) out[c] *= inv;
  return Unary(OpKind::kMeanRows, x, std::move(out));
}

Var Sum(const Var& x) {
  double total = 0.0;
  for (double v : x.value().data()) total += v;
  return Unary(OpKind::kSum, x, Tensor::Scalar(total));
}

Var Concat(std::span<const Var> parts, std::size_t axis) {
  if (parts.empty()) throw ShapeError("concat of zero tensors");
  if (axis > 1) throw ShapeError("concat axis must be 0 or 1");
  Tape& tape = parts.front().tape();
  const Tensor& first = parts.front().value();
  RequireMatrix("concat", first);
  std::size_t rows = 0, cols = 0;
  for (const Var& p : parts) {
    SameTape(parts.front(), p);
    const Tensor& t = p.value();
    RequireMatrix("concat", t);
    if (axis == 0) {
      if (t.cols() != first.cols()) Mismatch("concat", first.shape(), t.shape());
      rows += t.rows();
      cols = t.cols();
    } else {
      if (t.rows() != first.rows()) Mismatch("concat", first.shape(), t.shape());
      cols += t.cols();
      rows = t.rows();
    }
  }
  Tensor out = Tensor::Zeros({rows, cols});
  std::size_t offset = 0;
  Node n;
  n.kind = OpKind::kConcat;
  n.axis = axis;
  for (const Var& p : parts) {
    const Tensor& t = p.value();
    for (std::size_t r = 0; r < t.rows(); ++r) {
      for (std::size_t c = 0; c < t.cols(); ++c) {
        if (axis == 0) {
          out.at(offset + r, c) = t.at(r, c);
        } else {
          out.at(r, offset + c) = t.at(r, c);
        }
      }
    }
    offset += axis == 0 ? t.rows() : t.cols();
    n.inputs.push_back(p.id());
  }
  n.value = std::move(out);
  return tape.Record(std::move(n));
}

Var Scale(const Var& x, double factor) {
  Node n;
  n.kind = OpKind::kScale;
  n.inputs = {x.id()};
  n.scalar = factor;
  n.value = Map(x.value(), [factor](double v) { return v * factor; });
  return x.tape().Record(std::move(n));
}

Var Transpose(const Var& x) {
  const Tensor& v = x.value();
  RequireMatrix("transpose", v);
  Tensor out = Tensor::Zeros({v.cols(), v.rows()});
  for (std::size_t r = 0; r < v.rows(); ++r) {
    for (std::size_t c = 0; c < v.cols(); ++c) out.at(c, r) = v.at(r, c);
  }
  return Unary(OpKind::kTranspose, x, std::move(out));
}

Var Softmax(const Var& logits, std::size_t axis) {
  const Tensor& v = logits.value();
  if (v.rank() > 2 || axis >= v.rank()) {
    throw ShapeError("softmax: axis " + std::to_string(axis) +
                     " invalid for shape " + ShapeToString(v.shape()));
  }
  Tensor out = v;
  ForEachSlice(v, axis, [&](std::size_t off, std::size_t stride,
                            std::size_t count) {
    double peak = v[off];
    for (std::size_t i = 1; i < count; ++i) peak = std::max(peak, v[off + i * stride]);
    double total = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double e = std::exp(v[off + i * stride] - peak);
      out[off + i * stride] = e;
      total += e;
    }
    for (std::size_t i = 0; i < count; ++i) out[off + i * stride] /= total;
  });
  Node n;
  n.kind = OpKind::kSoftmax;
  n.inputs = {logits.id()};
  n.axis = axis;
  n.value = std::move(out);
  return logits.tape().Record(std::move(n));
}

Var CrossEntropy(const Var& probs, std::size_t target) {
  const Tensor& p = probs.value();
  if (p.rank() > 2 || p.rows() != 1) {
    throw ShapeError("cross_entropy: expected one probability row, got " +
                     ShapeToString(p.shape()));
  }
  if (target >= p.size()) {
    throw IndexError("cross_entropy: target " + std::to_string(target) +
                     " out of range for " + std::to_string(p.size()) +
                     " classes");
  }
  const double clamped = std::max(p[target], DBL_MIN);
  Node n;
  n.kind = OpKind::kCrossEntropy;
  n.inputs = {probs.id()};
  n.indices = {target};
  n.value = Tensor::Scalar(0.0 - std::log(clamped));
  return probs.tape().Record(std::move(n));
}

Var GatherRows(const Var& matrix, std::span<const std::size_t> indices) {
  const Tensor& m = matrix.value();
  RequireMatrix("gather_rows", m);
  if (indices.empty()) throw ShapeError("gather_rows: empty index list");
  Tensor out = Tensor::Zeros({indices.size(), m.cols()});
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= m.rows()) {
      throw IndexError("gather_rows: index " + std::to_string(indices[r]) +
                       " out of range for " + std::to_string(m.rows()) +
                       " rows");
    }
    std::copy_n(m.row(indices[r]).begin(), m.cols(), out.mutable_row(r).begin());
  }
  Node n;
  n.kind = OpKind::kGatherRows;
  n.inputs = {matrix.id()};
  n.indices.assign(indices.begin(), indices.end());
  n.value = std::move(out);
  return matrix.tape().Record(std::move(n));
}

namespace internal {

void Propagate(const Tape& tape, const Node& node, const Tensor& g,
               const std::function<void(NodeId, Tensor)>& accumulate) {
  auto input = [&](std::size_t i) -> const Tensor& {
    return tape.value(node.inputs[i]);
  };
  switch (node.kind) {
    case OpKind::kLeaf:
      return;
    case OpKind::kAdd:
    case OpKind::kSub: {
      accumulate(node.inputs[0], ReduceTo(g, input(0)));
      Tensor gb = ReduceTo(g, input(1));
      if (node.kind == OpKind::kSub) {
        for (double& v : gb.mutable_data()) v = -v;
      }
      accumulate(node.inputs[1], std::move(gb));
      return;
    }
    case OpKind::kMul: {
      const Tensor& a = input(0);
      const Tensor& b = input(1);
      auto times = [](double x, double y) { return x * y; };
      accumulate(node.inputs[0], ReduceTo(Elementwise(g, b, g.shape(), times), a));
      accumulate(node.inputs[1], ReduceTo(Elementwise(g, a, g.shape(), times), b));
      return;
    }
    case OpKind::kMatMul: {
      accumulate(node.inputs[0], MatMulRaw(g, false, input(1), true));
      accumulate(node.inputs[1], MatMulRaw(input(0), true, g, false));
      return;
    }
    case OpKind::kRelu: {
      Tensor out = g;
      const Tensor& x = input(0);
      for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(x[i] > 0.0)) out[i] = 0.0;
      }
      accumulate(node.inputs[0], std::move(out));
      return;
    }
    case OpKind::kTanh: {
      Tensor out = g;
      for (std::size_t i = 0; i < out.size(); ++i) {
        const double y = node.value[i];
        out[i] *= 1.0 - y * y;
      }
      accumulate(node.inputs[0], std::move(out));
      return;
    }
    case OpKind::kMean: {
      const Tensor& x = input(0);
      accumulate(node.inputs[0],
                 Tensor::Filled(x.shape(), g[0] / static_cast<double>(x.size())));
      return;
    }
    case OpKind::kMeanRows: {
      const Tensor& x = input(0);
      Tensor out = Tensor::Zeros(x.shape());
      const double inv = 1.0 / static_cast<double>(x.rows());
      for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) out.at(r, c) = g[c] * inv;
      }
      accumulate(node.inputs[0], std::move(out));
      return;
    }
    case OpKind::kSum:
      accumulate(node.inputs[0], Tensor::Filled(input(0).shape(), g[0]));
      return;
    case OpKind::kConcat: {
      std::size_t offset = 0;
      for (NodeId in : node.inputs) {
        const Tensor& t = tape.value(in);
        Tensor part = Tensor::Zeros(t.shape());
        for (std::size_t r = 0; r < t.rows(); ++r) {
          for (std::size_t c = 0; c < t.cols(); ++c) {
            part.at(r, c) = node.axis == 0 ? g.at(offset + r, c)
                                           : g.at(r, offset + c);
          }
        }
        offset += node.axis == 0 ? t.rows() : t.cols();
        accumulate(in, std::move(part));
      }
      return;
    }
    case OpKind::kScale: {
      Tensor out = g;
      for (double& v : out.mutable_data()) v *= node.scalar;
      accumulate(node.inputs[0], std::move(out));
      return;
    }
    case OpKind::kTranspose: {
      Tensor out = Tensor::Zeros(input(0).shape());
      for (std::size_t r = 0; r < g.rows(); ++r) {
        for (std::size_t c = 0; c < g.cols(); ++c) out.at(c, r) = g.at(r, c);
      }
      accumulate(node.inputs[0], std::move(out));
      return;
    }
    case OpKind::kSoftmax: {
      const Tensor& y = node.value;
      Tensor out = Tensor::Zeros(y.shape());
      ForEachSlice(y, node.axis, [&](std::size_t off, std::size_t stride,
                                     std::size_t count) {
        double dot = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
          dot += g[off + i * stride] * y[off + i * stride];
        }
        for (std::size_t i = 0; i < count; ++i) {
          const std::size_t k = off + i * stride;
          out[k] = y[k] * (g[k] - dot);
        }
      });
      accumulate(node.inputs[0], std::move(out));
      return;
    }
    case OpKind::kCrossEntropy: {
      const Tensor& p = input(0);
      const std::size_t t = node.indices[0];
      Tensor out = Tensor::Zeros(p.shape());
      out[t] = -g[0] / std::max(p[t], DBL_MIN);
      accumulate(node.inputs[0], std::move(out));
      return;
    }
    case OpKind::kGatherRows: {
      const Tensor& m = input(0);
      Tensor out = Tensor::Zeros(m.shape());
      for (std::size_t r = 0; r < node.indices.size(); ++r) {
        auto dst = out.mutable_row(node.indices[r]);
        auto src = g.row(r);
        for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += src[c];
      }
      accumulate(node.inputs[0], std::move(out));
      return;
    }
  }
}

}  // namespace internal
}  // namespace interp::ad

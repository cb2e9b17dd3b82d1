// interp/autodiff/tape.h

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

#ifndef INTERP_AUTODIFF_TAPE_H_
#define INTERP_AUTODIFF_TAPE_H_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "interp/autodiff/tensor.h"

namespace interp::ad {

using NodeId = std::size_t;

enum class OpKind {
  kLeaf,
  kAdd,
  kSub,
  kMul,
  kMatMul,
  kRelu,
  kTanh,
  kMean,
  kMeanRows,
  kSum,
  kConcat,
  kScale,
  kTranspose,
  kSoftmax,
  kCrossEntropy,
  kGatherRows,
};

const char* OpName(OpKind kind);

/// One recorded operation. Inputs always refer to earlier nodes.
struct Node {
  OpKind kind = OpKind::kLeaf;
  std::vector<NodeId> inputs;
  Tensor value;
  // Per-op saved state.
  double scalar = 0.0;
  std::size_t axis = 0;
  std::vector<std::size_t> indices;
  bool parameter = false;
  bool watched = false;
};

class Tape;

/// Handle to a node on a tape. Cheap to copy; only valid while the tape lives.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, NodeId id) : tape_(tape), id_(id) {}

  Tape& tape() const { return *tape_; }
  NodeId id() const { return id_; }
  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }

 private:
  Tape* tape_ = nullptr;
  NodeId id_ = 0;
};

/// Result of a backward pass: gradient tensors keyed by node id. Holds an
/// entry for every parameter, watched node and hooked node.
class Gradients {
 public:
  bool Has(NodeId id) const { return grads_.count(id) != 0; }
  bool Has(const Var& v) const { return Has(v.id()); }
  /// Throws IndexError when the node carries no gradient.
  const Tensor& At(NodeId id) const;
  const Tensor& At(const Var& v) const { return At(v.id()); }
  std::size_t size() const { return grads_.size(); }
  const std::map<NodeId, Tensor>& entries() const { return grads_; }

 private:
  friend class Tape;
  std::map<NodeId, Tensor> grads_;
};

using GradientSink = std::function<void(const Tensor&)>;

/// Append-only record of one forward pass. A tape supports exactly one
/// backward pass; build a fresh tape per forward.
class Tape {
 public:
  using HookId = std::size_t;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf whose gradient is reported by Backward.
  Var Parameter(Tensor value);
  /// Leaf that does not need a gradient.
  Var Constant(Tensor value);
  /// Report the gradient of an intermediate node.
  void Watch(const Var& v);

  /// Called with the gradient flowing into `node` once it is complete.
  HookId AddHook(NodeId node, GradientSink sink);
  void RemoveHook(HookId id);

  Gradients Backward(const Var& loss);

  bool consumed() const { return consumed_; }
  std::size_t size() const { return nodes_.size(); }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  const Tensor& value(NodeId id) const { return nodes_.at(id).value; }

  /// Records a node. Used by the op implementations.
  Var Record(Node node);

 private:
  struct Hook {
    NodeId node;
    GradientSink sink;
    bool active;
  };

  std::vector<Node> nodes_;
  std::vector<Hook> hooks_;
  bool consumed_ = false;
};

inline const Tensor& Var::value() const { return tape_->value(id_); }

}  // namespace interp::ad

#endif  // INTERP_AUTODIFF_TAPE_H_

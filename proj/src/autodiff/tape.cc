// src/autodiff/tape.cc

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

#include "interp/autodiff/tape.h"

#include "interp/autodiff/ops.h"
#include "interp/errors.h"

namespace interp::ad {

const char* OpName(OpKind kind) {
  switch (kind) {
    case OpKind::kLeaf: return "leaf";
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kMatMul: return "matmul";
    case OpKind::kRelu: return "relu";
    case OpKind::kTanh: return "tanh";
    case OpKind::kMean: return "mean";
    case OpKind::kMeanRows: return "mean_rows";
    case OpKind::kSum: return "sum";
    case OpKind::kConcat: return "concat";
    case OpKind::kScale: return "scale";
    case OpKind::kTranspose: return "transpose";
    case OpKind::kSoftmax: return "softmax";
    case OpKind::kCrossEntropy: return "cross_entropy";
    case OpKind::kGatherRows: return "gather_rows";
  }
  return "unknown";
}

const Tensor& Gradients::At(NodeId id) const {
  auto it = grads_.find(id);
  if (it == grads_.end()) {
    throw IndexError("no gradient recorded for node " + std::to_string(id));
  }
  return it->second;
}

Var Tape::Parameter(Tensor value) {
  Node n;
  n.value = std::move(value);
  n.parameter = true;
  return Record(std::move(n));
}

Var Tape::Constant(Tensor value) {
  Node n;
  n.value = std::move(value);
  return Record(std::move(n));
}

void Tape::Watch(const Var& v) { nodes_.at(v.id()).watched = true; }

Tape::HookId Tape::AddHook(NodeId node, GradientSink sink) {
  if (node >= nodes_.size()) {
    throw IndexError("hook on unknown node " + std::to_string(node));
  }
  hooks_.push_back({node, std::move(sink), true});
  return hooks_.size() - 1;
}

void Tape::RemoveHook(HookId id) { hooks_.at(id).active = false; }

Var Tape::Record(Node node) {
  if (consumed_) throw TapeConsumedError("cannot record on a consumed tape");
  for (NodeId in : node.inputs) {
    if (in >= nodes_.size()) {
      throw ContractError("node input refers to a later node");
    }
  }
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Gradients Tape::Backward(const Var& loss) {
  if (&loss.tape() != this) throw ContractError("loss is on a different tape");
  if (consumed_) {
    throw TapeConsumedError("backward already ran on this tape");
  }
  if (!loss.value().is_scalar()) {
    throw ContractError("backward needs a scalar loss, got shape " +
                        ShapeToString(loss.shape()));
  }
  consumed_ = true;

  std::vector<std::optional<Tensor>> grads(loss.id() + 1);
  grads[loss.id()] = Tensor::Filled(loss.shape(), 1.0);

  auto accumulate = [&grads](NodeId id, Tensor g) {
    auto& slot = grads[id];
    if (!slot) {
      slot = std::move(g);
      return;
    }
    auto dst = slot->mutable_data();
    auto src = g.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  };

  std::vector<bool> hooked(nodes_.size(), false);
  for (const Hook& h : hooks_) {
    if (h.active) hooked[h.node] = true;
  }

  Gradients out;
  for (NodeId id = loss.id() + 1; id-- > 0;) {
    const Node& n = nodes_[id];
    if (!grads[id]) continue;
    // All consumers of `id` have larger ids, so its gradient is final here.
    if (hooked[id]) {
      for (const Hook& h : hooks_) {
        if (h.active && h.node == id) h.sink(*grads[id]);
      }
    }
    if (n.parameter || n.watched || hooked[id]) out.grads_[id] = *grads[id];
    if (n.kind != OpKind::kLeaf) {
      internal::Propagate(*this, n, *grads[id], accumulate);
    }
    if (!(n.parameter || n.watched || hooked[id])) grads[id].reset();
  }
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    const Node& n = nodes_[id];
    if ((n.parameter || n.watched) && !out.Has(id)) {
      out.grads_[id] = Tensor::Zeros(n.value.shape());
    }
  }
  return out;
}

}  // namespace interp::ad

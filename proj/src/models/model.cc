// src/models/model.cc

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

#include "interp/models/model.h"

#include "interp/errors.h"

namespace interp::models {

std::string_view TaskName(TaskKind task) {
  return task == TaskKind::kClassification ? "classification" : "tagging";
}

TaskKind ParseTask(std::string_view name) {
  if (name == "classification") return TaskKind::kClassification;
  if (name == "tagging") return TaskKind::kTagging;
  throw SchemaError("unknown task '" + std::string(name) + "'");
}

std::string_view ArchitectureName(Architecture arch) {
  switch (arch) {
    case Architecture::kLinearBag: return "linear_bag";
    case Architecture::kMeanPool: return "mean_pool";
    case Architecture::kSelfAttention: return "self_attention";
    case Architecture::kTagger: return "tagger";
  }
  return "unknown";
}

Architecture ParseArchitecture(std::string_view name) {
  for (Architecture a : {Architecture::kLinearBag, Architecture::kMeanPool,
                         Architecture::kSelfAttention, Architecture::kTagger}) {
    if (ArchitectureName(a) == name) return a;
  }
  throw SchemaError("unknown architecture '" + std::string(name) + "'");
}

TaskKind TaskOf(Architecture arch) {
  return arch == Architecture::kTagger ? TaskKind::kTagging
                                       : TaskKind::kClassification;
}

ad::Tensor Model::ContextIndependentMatrix() const {
  throw UnsupportedModelError("model '" +
                              std::string(ArchitectureName(arch())) +
                              "' has no context-independent stage");
}

const ad::Tensor& Model::parameter(std::string_view name) const {
  auto it = params_.find(name);
  if (it == params_.end()) {
    throw IndexError("unknown parameter '" + std::string(name) + "'");
  }
  return it->second;
}

ad::Tensor& Model::mutable_parameter(std::string_view name) {
  auto it = params_.find(name);
  if (it == params_.end()) {
    throw IndexError("unknown parameter '" + std::string(name) + "'");
  }
  return it->second;
}

ForwardPass::ForwardPass(const Model& model, bool trainable) : model_(model) {
  for (const auto& [name, value] : model.parameters()) {
    params_.emplace(name, trainable ? tape_.Parameter(value)
                                    : tape_.Constant(value));
  }
}

const ad::Var& ForwardPass::Param(std::string_view name) const {
  auto it = params_.find(name);
  if (it == params_.end()) {
    throw IndexError("unknown parameter '" + std::string(name) + "'");
  }
  return it->second;
}

void ForwardPass::SetEmbeddingTransform(EmbeddingTransform transform) {
  transform_ = std::move(transform);
}

ad::Var ForwardPass::Run(std::span<const std::size_t> ids) {
  if (embedding_) throw ContractError("ForwardPass::Run called twice");
  if (ids.empty()) throw EmptyInputError("cannot run a model on zero tokens");
  ad::Var embedded = model_.Embed(*this, ids);
  if (transform_) embedded = transform_(embedded);
  if (embedded.value().rows() != ids.size() ||
      embedded.value().cols() != model_.embedding_dim()) {
    throw ShapeError("embedding stage produced shape " +
                     ad::ShapeToString(embedded.shape()));
  }
  embedding_ = embedded;
  tape_.AddHook(embedded.id(), [this](const ad::Tensor& grad) {
    if (sink_) sink_(grad);
  });
  return model_.Logits(*this, embedded);
}

const ad::Var& ForwardPass::embedding() const {
  if (!embedding_) throw ContractError("embedding() before Run()");
  return *embedding_;
}

ad::Tensor EmbedTokens(const Model& model, std::span<const std::size_t> ids) {
  ForwardPass pass(model);
  return model.Embed(pass, ids).value();
}

ad::Tensor Probabilities(const Model& model, std::span<const std::size_t> ids) {
  ForwardPass pass(model);
  return ad::Softmax(pass.Run(ids), 1).value();
}

ad::Var AddRowBias(ad::Tape& tape, const ad::Var& x, const ad::Var& bias) {
  const std::size_t rows = x.value().rows();
  if (rows == 1) return ad::Add(x, bias);
  ad::Var ones = tape.Constant(ad::Tensor::Filled({rows, 1}, 1.0));
  return ad::Add(x, ad::MatMul(ones, bias));
}

ad::Tensor ExtractContextIndependentMatrix(const Model& model) {
  return model.ContextIndependentMatrix();
}

}  // namespace interp::models

// interp/models/model.h

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

#ifndef INTERP_MODELS_MODEL_H_
#define INTERP_MODELS_MODEL_H_

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "interp/autodiff/ops.h"
#include "interp/autodiff/tape.h"
#include "interp/models/vocabulary.h"

namespace interp::models {

enum class TaskKind { kClassification, kTagging };

enum class Architecture {
  kLinearBag,      // mean of embeddings -> linear layer
  kMeanPool,       // mean of embeddings -> MLP
  kSelfAttention,  // projection -> one attention head -> mean -> MLP
  kTagger,         // per-position MLP over a +-1 token window
};

std::string_view TaskName(TaskKind task);
TaskKind ParseTask(std::string_view name);
std::string_view ArchitectureName(Architecture arch);
Architecture ParseArchitecture(std::string_view name);
TaskKind TaskOf(Architecture arch);

struct ModelSpec {
  Architecture arch = Architecture::kMeanPool;
  Vocabulary vocab;
  std::vector<std::string> labels;
  std::size_t embedding_dim = 32;
  std::size_t hidden_dim = 32;
};

using ParameterSet = std::map<std::string, ad::Tensor, std::less<>>;

class ForwardPass;

/// A differentiable text model. Subclasses provide two stages:
///   Embed  - context-independent: token ids -> [n, d] features. This is the
///            embedder whose output gradient the interpreters read.
///   Logits - everything after: [n, d] -> [1, labels] (classification) or
///            [n, labels] (tagging).
/// Trained models are immutable and safe to share across threads.
class Model {
 public:
  explicit Model(ModelSpec spec) : spec_(std::move(spec)) {}
  virtual ~Model() = default;

  virtual std::unique_ptr<Model> Clone() const = 0;

  virtual ad::Var Embed(ForwardPass& pass,
                        std::span<const std::size_t> ids) const = 0;
  virtual ad::Var Logits(ForwardPass& pass, const ad::Var& embedded) const = 0;

  /// One row per vocabulary entry: that token's output of the Embed stage.
  /// Models without a context-independent stage throw UnsupportedModelError.
  virtual ad::Tensor ContextIndependentMatrix() const;

  const ModelSpec& spec() const { return spec_; }
  Architecture arch() const { return spec_.arch; }
  TaskKind task() const { return TaskOf(spec_.arch); }
  const Vocabulary& vocab() const { return spec_.vocab; }
  const std::vector<std::string>& labels() const { return spec_.labels; }
  std::size_t embedding_dim() const { return spec_.embedding_dim; }

  const ParameterSet& parameters() const { return params_; }
  ParameterSet& mutable_parameters() { return params_; }
  const ad::Tensor& parameter(std::string_view name) const;
  ad::Tensor& mutable_parameter(std::string_view name);

 protected:
  ModelSpec spec_;
  ParameterSet params_;
};

/// Rewrites the embedding-stage output before the rest of the model sees it.
using EmbeddingTransform = std::function<ad::Var(const ad::Var&)>;

/// One forward (and at most one backward) pass of a model on its own tape.
/// Holds the parameter leaves, the embedding-stage node and the slot that
/// embedding-gradient hooks attach to.
class ForwardPass {
 public:
  /// With `trainable`, parameters are tape parameters whose gradients
  /// Backward reports.
  explicit ForwardPass(const Model& model, bool trainable = false);
  ForwardPass(const ForwardPass&) = delete;
  ForwardPass& operator=(const ForwardPass&) = delete;

  ad::Tape& tape() { return tape_; }
  const Model& model() const { return model_; }
  const ad::Var& Param(std::string_view name) const;

  void SetEmbeddingTransform(EmbeddingTransform transform);

  /// Runs Embed, the optional transform and Logits. One call per pass.
  ad::Var Run(std::span<const std::size_t> ids);

  /// Embedding-stage output (after any transform). Valid after Run.
  const ad::Var& embedding() const;

  /// Used by the predictor's hook handle; at most one sink at a time.
  bool has_embedding_sink() const { return static_cast<bool>(sink_); }
  void SetEmbeddingSink(ad::GradientSink sink) { sink_ = std::move(sink); }
  void ClearEmbeddingSink() { sink_ = nullptr; }

 private:
  const Model& model_;
  ad::Tape tape_;
  std::map<std::string, ad::Var, std::less<>> params_;
  EmbeddingTransform transform_;
  std::optional<ad::Var> embedding_;
  ad::GradientSink sink_;
};

/// Output of the Embed stage for the given tokens, [n, d].
ad::Tensor EmbedTokens(const Model& model, std::span<const std::size_t> ids);

/// Softmax over the label axis for each output row.
ad::Tensor Probabilities(const Model& model, std::span<const std::size_t> ids);

/// x + bias for every row of x; bias is [1, cols]. Written as
/// ones[n,1] * bias so that no broadcasting rule is needed.
ad::Var AddRowBias(ad::Tape& tape, const ad::Var& x, const ad::Var& bias);

/// Model-agnostic entry point; same as model.ContextIndependentMatrix().
ad::Tensor ExtractContextIndependentMatrix(const Model& model);

}  // namespace interp::models

#endif  // INTERP_MODELS_MODEL_H_

// interp/models/architectures.h

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

#ifndef INTERP_MODELS_ARCHITECTURES_H_
#define INTERP_MODELS_ARCHITECTURES_H_

#include <cstdint>
#include <memory>

#include "interp/models/model.h"

namespace interp::models {

/// logits = mean(E[ids]) W + b. The loss is affine in each token embedding
/// up to the softmax, which makes first-order estimates checkable.
class LinearBagModel : public Model {
 public:
  using Model::Model;
  std::unique_ptr<Model> Clone() const override;
  ad::Var Embed(ForwardPass& pass, std::span<const std::size_t> ids) const override;
  ad::Var Logits(ForwardPass& pass, const ad::Var& embedded) const override;
  ad::Tensor ContextIndependentMatrix() const override;
};

/// Mean-pooled embeddings followed by a one-hidden-layer ReLU MLP.
class MeanPoolClassifier : public Model {
 public:
  using Model::Model;
  std::unique_ptr<Model> Clone() const override;
  ad::Var Embed(ForwardPass& pass, std::span<const std::size_t> ids) const override;
  ad::Var Logits(ForwardPass& pass, const ad::Var& embedded) const override;
  ad::Tensor ContextIndependentMatrix() const override;
};

/// tanh projection of each embedding (context independent), then one
/// scaled dot-product attention head with a residual connection, mean
/// pooling and the MLP head.
class SelfAttentionClassifier : public Model {
 public:
  using Model::Model;
  std::unique_ptr<Model> Clone() const override;
  ad::Var Embed(ForwardPass& pass, std::span<const std::size_t> ids) const override;
  ad::Var Logits(ForwardPass& pass, const ad::Var& embedded) const override;
  ad::Tensor ContextIndependentMatrix() const override;
};

/// Per-token tagger: [e(i-1), e(i), e(i+1)] -> ReLU MLP -> tag logits.
/// Out-of-range neighbours contribute zeros.
class TokenTagger : public Model {
 public:
  using Model::Model;
  std::unique_ptr<Model> Clone() const override;
  ad::Var Embed(ForwardPass& pass, std::span<const std::size_t> ids) const override;
  ad::Var Logits(ForwardPass& pass, const ad::Var& embedded) const override;
  ad::Tensor ContextIndependentMatrix() const override;
};

/// Builds a model with freshly initialised parameters. Weights are Gaussian
/// with stddev 1/sqrt(fan_in), biases zero and the PAD embedding row zero.
std::unique_ptr<Model> CreateModel(ModelSpec spec, std::uint64_t seed);

/// Builds a model with every parameter zero-filled, ready for loading.
std::unique_ptr<Model> CreateEmptyModel(ModelSpec spec);

}  // namespace interp::models

#endif  // INTERP_MODELS_ARCHITECTURES_H_

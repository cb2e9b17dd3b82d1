// interp/predictor/predictor.h

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

#ifndef INTERP_PREDICTOR_PREDICTOR_H_
#define INTERP_PREDICTOR_PREDICTOR_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "interp/autodiff/tape.h"
#include "interp/models/model.h"

namespace interp::predictor {

using models::Model;
using models::TaskKind;

/// Tokenized model input. tokens and token_ids have equal, non-zero length.
struct Instance {
  std::vector<std::string> tokens;
  std::vector<std::size_t> token_ids;
  TaskKind task = TaskKind::kClassification;

  std::size_t size() const { return tokens.size(); }
};

/// An input paired with one of the model's own decisions. For classification
/// `label` is the argmax class; for tagging it is the tag predicted over the
/// sorted, non-empty `positions`. Never built from gold labels.
struct LabeledInstance {
  Instance instance;
  std::size_t label = 0;
  std::vector<std::size_t> positions;
};

struct Prediction {
  TaskKind task = TaskKind::kClassification;
  /// [1, labels] for classification, [tokens, tags] for tagging.
  ad::Tensor probabilities;
  /// Argmax label per row.
  std::vector<std::size_t> argmax;
};

/// Loss gradient with respect to the embedding-stage output, one row of
/// length d per token.
struct GradientRecord {
  ad::Tensor gradients;
  /// Embedding-stage values the gradient was taken at.
  ad::Tensor embeddings;
  double loss = 0.0;
};

Instance MakeInstance(const Model& model, std::vector<std::string> tokens);
/// Tokenizes; out-of-vocabulary tokens map to UNK.
Instance MakeInstance(const Model& model, std::string_view text);

Prediction Predict(const Model& model, const Instance& instance);

struct PredictResult {
  Instance instance;
  Prediction prediction;
};

/// Request {"input": string}. SchemaError when "input" is missing or not a
/// string, EmptyInputError when it holds no tokens.
PredictResult PredictJson(const Model& model, const nlohmann::json& request);

/// {"tokens", "labels", "probabilities" | "tag_distributions", "prediction"}.
nlohmann::ordered_json PredictionToJson(const Model& model,
                                        const Instance& instance,
                                        const Prediction& prediction);

/// Classification: exactly one instance carrying the argmax class.
/// Tagging: one instance per maximal run of identical non-O predicted tags.
std::vector<LabeledInstance> PredictionsToLabeledInstances(
    const Model& model, const Instance& instance, const Prediction& prediction);

/// Convenience: predict, then convert.
std::vector<LabeledInstance> LabeledInstancesFor(const Model& model,
                                                 const Instance& instance);

/// {"label": name} plus "positions" for tagging.
nlohmann::ordered_json LabeledInstanceToJson(const Model& model,
                                             const LabeledInstance& labeled);

/// Runs the pass and returns the pseudo-label loss: cross-entropy for
/// classification, mean cross-entropy over the position set for tagging.
ad::Var InstanceLoss(models::ForwardPass& pass, const LabeledInstance& labeled);

/// Scoped registration of a gradient sink on a pass's embedding stage.
/// Destroying or releasing the handle detaches the sink.
class EmbeddingHook {
 public:
  /// Throws HookConflictError when the pass already has a sink.
  EmbeddingHook(models::ForwardPass& pass, ad::GradientSink sink);
  ~EmbeddingHook() { Release(); }
  EmbeddingHook(EmbeddingHook&& other) noexcept : pass_(other.pass_) {
    other.pass_ = nullptr;
  }
  EmbeddingHook(const EmbeddingHook&) = delete;
  EmbeddingHook& operator=(const EmbeddingHook&) = delete;
  EmbeddingHook& operator=(EmbeddingHook&&) = delete;

  void Release();
  bool active() const { return pass_ != nullptr; }

 private:
  models::ForwardPass* pass_;
};

EmbeddingHook RegisterEmbeddingHook(models::ForwardPass& pass,
                                    ad::GradientSink sink);

struct GradientOptions {
  /// Applied to the embedding-stage output before the rest of the model.
  /// The reported gradient is taken at the transformed embeddings.
  models::EmbeddingTransform transform;
  /// Multiplies the loss before differentiation.
  double loss_scale = 1.0;
};

GradientRecord GetGradients(const Model& model, const LabeledInstance& labeled,
                            const GradientOptions& options = {});

/// Pseudo-label loss without a backward pass.
double InstanceLossValue(const Model& model, const LabeledInstance& labeled,
                         const GradientOptions& options = {});

/// The model's current decision on the part of the output a labeled
/// instance refers to.
struct InstancePrediction {
  /// Argmax of the row (classification) or of each position (tagging).
  std::vector<std::size_t> labels;
  /// Class probabilities, or the mean tag distribution over the positions.
  std::vector<double> probabilities;

  /// True when every entry of `labels` equals `label`.
  bool Is(std::size_t label) const;
};

InstancePrediction PredictFor(const Model& model, const LabeledInstance& labeled);

/// Same prediction seen through a different token sequence (e.g. after an
/// attack step). `positions` must be valid for `ids`.
InstancePrediction PredictFor(const Model& model,
                              const std::vector<std::size_t>& ids,
                              const std::vector<std::size_t>& positions);

/// "positive" for classification; ["LOC", "LOC"] for tagging.
nlohmann::ordered_json InstancePredictionToJson(const Model& model,
                                                const InstancePrediction& p);

}  // namespace interp::predictor

#endif  // INTERP_PREDICTOR_PREDICTOR_H_

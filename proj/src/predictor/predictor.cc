// src/predictor/predictor.cc

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

#include "interp/predictor/predictor.h"

#include <algorithm>

#include "interp/autodiff/ops.h"
#include "interp/errors.h"

namespace interp::predictor {
namespace {

std::size_t ArgMax(std::span<const double> values) {
  return static_cast<std::size_t>(
      std::max_element(values.begin(), values.end()) - values.begin());
}

// Index of the "O" tag, or labels.size() when the model has none.
std::size_t OutsideTag(const Model& model) {
  const auto& labels = model.labels();
  return static_cast<std::size_t>(
      std::find(labels.begin(), labels.end(), "O") - labels.begin());
}

void Validate(const Model& model, const LabeledInstance& labeled) {
  const Instance& inst = labeled.instance;
  if (inst.tokens.empty() || inst.tokens.size() != inst.token_ids.size()) {
    throw ContractError("instance needs matching, non-empty tokens and ids");
  }
  if (labeled.label >= model.labels().size()) {
    throw ContractError("pseudo-label outside the model's label set");
  }
  if (model.task() == TaskKind::kTagging) {
    if (labeled.positions.empty()) {
      throw ContractError("tagging instance needs a non-empty position set");
    }
    for (std::size_t p : labeled.positions) {
      if (p >= inst.size()) throw IndexError("tag position out of range");
    }
  }
}

}  // namespace

Instance MakeInstance(const Model& model, std::vector<std::string> tokens) {
  if (tokens.empty()) throw EmptyInputError("instance has no tokens");
  Instance inst;
  inst.token_ids = model.vocab().Ids(tokens);
  inst.tokens = std::move(tokens);
  inst.task = model.task();
  return inst;
}

Instance MakeInstance(const Model& model, std::string_view text) {
  return MakeInstance(model, models::Tokenize(text));
}

Prediction Predict(const Model& model, const Instance& instance) {
  Prediction p;
  p.task = model.task();
  p.probabilities = models::Probabilities(model, instance.token_ids);
  for (std::size_t r = 0; r < p.probabilities.rows(); ++r) {
    p.argmax.push_back(ArgMax(p.probabilities.row(r)));
  }
  return p;
}

PredictResult PredictJson(const Model& model, const nlohmann::json& request) {
  if (!request.is_object() || !request.contains("input")) {
    throw SchemaError("request must be an object with an \"input\" field");
  }
  if (!request["input"].is_string()) {
    throw SchemaError("\"input\" must be a string");
  }
  PredictResult result;
  result.instance = MakeInstance(model, request["input"].get<std::string>());
  result.prediction = Predict(model, result.instance);
  return result;
}

nlohmann::ordered_json PredictionToJson(const Model& model,
                                        const Instance& instance,
                                        const Prediction& prediction) {
  nlohmann::ordered_json j;
  j["tokens"] = instance.tokens;
  j["labels"] = model.labels();
  const ad::Tensor& probs = prediction.probabilities;
  if (prediction.task == TaskKind::kClassification) {
    j["probabilities"] = probs.values();
    j["prediction"] = model.labels()[prediction.argmax.front()];
  } else {
    auto rows = nlohmann::ordered_json::array();
    auto tags = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < probs.rows(); ++r) {
      rows.push_back(std::vector<double>(probs.row(r).begin(), probs.row(r).end()));
      tags.push_back(model.labels()[prediction.argmax[r]]);
    }
    j["tag_distributions"] = std::move(rows);
    j["prediction"] = std::move(tags);
  }
  return j;
}

std::vector<LabeledInstance> PredictionsToLabeledInstances(
    const Model& model, const Instance& instance, const Prediction& prediction) {
  std::vector<LabeledInstance> out;
  if (prediction.task == TaskKind::kClassification) {
    out.push_back({instance, prediction.argmax.front(), {}});
    return out;
  }
  const std::size_t outside = OutsideTag(model);
  const auto& tags = prediction.argmax;
  for (std::size_t i = 0; i < tags.size();) {
    if (tags[i] == outside) {
      ++i;
      continue;
    }
    LabeledInstance run{instance, tags[i], {}};
    std::size_t j = i;
    while (j < tags.size() && tags[j] == tags[i]) run.positions.push_back(j++);
    out.push_back(std::move(run));
    i = j;
  }
  return out;
}

std::vector<LabeledInstance> LabeledInstancesFor(const Model& model,
                                                 const Instance& instance) {
  return PredictionsToLabeledInstances(model, instance, Predict(model, instance));
}

nlohmann::ordered_json LabeledInstanceToJson(const Model& model,
                                             const LabeledInstance& labeled) {
  nlohmann::ordered_json j;
  j["label"] = model.labels().at(labeled.label);
  if (model.task() == TaskKind::kTagging) j["positions"] = labeled.positions;
  return j;
}

ad::Var InstanceLoss(models::ForwardPass& pass, const LabeledInstance& labeled) {
  Validate(pass.model(), labeled);
  ad::Var probs = ad::Softmax(pass.Run(labeled.instance.token_ids), 1);
  if (pass.model().task() == TaskKind::kClassification) {
    return ad::CrossEntropy(probs, labeled.label);
  }
  // Only rows inside the position set enter the loss.
  ad::Var total;
  bool first = true;
  for (std::size_t p : labeled.positions) {
    const std::size_t row[] = {p};
    ad::Var term = ad::CrossEntropy(ad::GatherRows(probs, row), labeled.label);
    total = first ? term : ad::Add(total, term);
    first = false;
  }
  return ad::Scale(total, 1.0 / static_cast<double>(labeled.positions.size()));
}

EmbeddingHook::EmbeddingHook(models::ForwardPass& pass, ad::GradientSink sink)
    : pass_(&pass) {
  if (pass.has_embedding_sink()) {
    pass_ = nullptr;
    throw HookConflictError("an embedding hook is already registered");
  }
  pass.SetEmbeddingSink(std::move(sink));
}

void EmbeddingHook::Release() {
  if (pass_ != nullptr) pass_->ClearEmbeddingSink();
  pass_ = nullptr;
}

EmbeddingHook RegisterEmbeddingHook(models::ForwardPass& pass,
                                    ad::GradientSink sink) {
  return EmbeddingHook(pass, std::move(sink));
}

GradientRecord GetGradients(const Model& model, const LabeledInstance& labeled,
                            const GradientOptions& options) {
  models::ForwardPass pass(model);
  if (options.transform) pass.SetEmbeddingTransform(options.transform);
  GradientRecord record;
  bool captured = false;
  EmbeddingHook hook = RegisterEmbeddingHook(pass, [&](const ad::Tensor& g) {
    record.gradients = g;
    captured = true;
  });
  ad::Var loss = InstanceLoss(pass, labeled);
  if (options.loss_scale != 1.0) loss = ad::Scale(loss, options.loss_scale);
  record.loss = loss.value().item();
  record.embeddings = pass.embedding().value();
  pass.tape().Backward(loss);
  if (!captured) {
    // The loss does not depend on the embeddings at all.
    record.gradients = ad::Tensor::Zeros(pass.embedding().shape());
  }
  return record;
}

double InstanceLossValue(const Model& model, const LabeledInstance& labeled,
                         const GradientOptions& options) {
  models::ForwardPass pass(model);
  if (options.transform) pass.SetEmbeddingTransform(options.transform);
  return InstanceLoss(pass, labeled).value().item() * options.loss_scale;
}

bool InstancePrediction::Is(std::size_t label) const {
  return !labels.empty() &&
         std::all_of(labels.begin(), labels.end(),
                     [label](std::size_t l) { return l == label; });
}

InstancePrediction PredictFor(const Model& model,
                              const std::vector<std::size_t>& ids,
                              const std::vector<std::size_t>& positions) {
  const ad::Tensor probs = models::Probabilities(model, ids);
  InstancePrediction out;
  if (model.task() == TaskKind::kClassification) {
    out.probabilities = probs.values();
    out.labels = {ArgMax(probs.row(0))};
    return out;
  }
  out.probabilities.assign(probs.cols(), 0.0);
  for (std::size_t p : positions) {
    out.labels.push_back(ArgMax(probs.row(p)));
    for (std::size_t c = 0; c < probs.cols(); ++c) {
      out.probabilities[c] += probs.at(p, c);
    }
  }
  for (double& v : out.probabilities) v /= static_cast<double>(positions.size());
  return out;
}

InstancePrediction PredictFor(const Model& model, const LabeledInstance& labeled) {
  return PredictFor(model, labeled.instance.token_ids, labeled.positions);
}

nlohmann::ordered_json InstancePredictionToJson(const Model& model,
                                                const InstancePrediction& p) {
  if (model.task() == TaskKind::kClassification) {
    return model.labels().at(p.labels.front());
  }
  auto tags = nlohmann::ordered_json::array();
  for (std::size_t l : p.labels) tags.push_back(model.labels().at(l));
  return tags;
}

}  // namespace interp::predictor

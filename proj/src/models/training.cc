// src/models/training.cc

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

#include "interp/models/training.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "interp/errors.h"
#include "interp/random.h"

namespace interp::models {
namespace {

std::size_t LabelIndex(const Model& model, const std::string& label) {
  const auto& labels = model.labels();
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) {
    throw SchemaError("label '" + label + "' is not known to the model");
  }
  return static_cast<std::size_t>(it - labels.begin());
}

std::size_t ArgMax(std::span<const double> values) {
  return static_cast<std::size_t>(
      std::max_element(values.begin(), values.end()) - values.begin());
}

}  // namespace

ad::Var GoldLoss(ForwardPass& pass, const Example& example) {
  const Model& model = pass.model();
  const auto ids = model.vocab().Ids(example.tokens);
  ad::Var probs = ad::Softmax(pass.Run(ids), 1);
  if (model.task() == TaskKind::kClassification) {
    return ad::CrossEntropy(probs, LabelIndex(model, example.label));
  }
  if (example.tags.size() != example.tokens.size()) {
    throw SchemaError("tagging example needs one tag per token");
  }
  std::vector<ad::Var> losses;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const std::size_t row[] = {i};
    losses.push_back(ad::CrossEntropy(ad::GatherRows(probs, row),
                                      LabelIndex(model, example.tags[i])));
  }
  ad::Var total = losses.front();
  for (std::size_t i = 1; i < losses.size(); ++i) total = ad::Add(total, losses[i]);
  return ad::Scale(total, 1.0 / static_cast<double>(losses.size()));
}

double Accuracy(const Model& model, const std::vector<Example>& examples) {
  std::size_t correct = 0, total = 0;
  for (const auto& ex : examples) {
    const ad::Tensor probs = Probabilities(model, model.vocab().Ids(ex.tokens));
    if (model.task() == TaskKind::kClassification) {
      correct += ArgMax(probs.row(0)) == LabelIndex(model, ex.label);
      ++total;
    } else {
      for (std::size_t i = 0; i < ex.tokens.size(); ++i) {
        correct += ArgMax(probs.row(i)) == LabelIndex(model, ex.tags[i]);
        ++total;
      }
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

TrainMetrics Train(Model& model, const Dataset& dataset,
                   const TrainConfig& config) {
  if (dataset.train.empty()) throw ContractError("training set is empty");
  if (dataset.task != model.task()) {
    throw ContractError("dataset task does not match the model");
  }
  if (config.batch_size == 0) throw ContractError("batch_size must be >= 1");

  Rng rng(config.seed);
  std::vector<std::size_t> order(dataset.train.size());
  std::iota(order.begin(), order.end(), 0);

  TrainMetrics metrics;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    Shuffle(order, rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      ParameterSet grads;
      for (const auto& [name, value] : model.parameters()) {
        grads.emplace(name, ad::Tensor::Zeros(value.shape()));
      }
      for (std::size_t k = start; k < end; ++k) {
        ForwardPass pass(model, /*trainable=*/true);
        ad::Var loss = GoldLoss(pass, dataset.train[order[k]]);
        if (!std::isfinite(loss.value().item())) {
          throw TrainingDivergedError("loss became non-finite in epoch " +
                                      std::to_string(epoch));
        }
        epoch_loss += loss.value().item();
        const ad::Gradients g = pass.tape().Backward(loss);
        for (auto& [name, acc] : grads) {
          auto dst = acc.mutable_data();
          auto src = g.At(pass.Param(name)).data();
          for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
        }
      }
      const double step = config.learning_rate / static_cast<double>(end - start);
      for (auto& [name, value] : model.mutable_parameters()) {
        auto dst = value.mutable_data();
        auto src = grads.at(name).data();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] -= step * src[i];
      }
      auto pad = model.mutable_parameter("embedding").mutable_row(Vocabulary::kPad);
      std::fill(pad.begin(), pad.end(), 0.0);
    }
    metrics.epoch_losses.push_back(epoch_loss /
                                   static_cast<double>(order.size()));
  }
  if (!metrics.epoch_losses.empty()) {
    metrics.final_train_loss = metrics.epoch_losses.back();
  }
  metrics.heldout_accuracy = Accuracy(model, dataset.heldout);
  return metrics;
}

}  // namespace interp::models

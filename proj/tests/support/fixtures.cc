// tests/support/fixtures.cc

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

#include "fixtures.h"

#include <algorithm>
#include <cmath>

#include "interp/models/training.h"
#include "interp/random.h"

namespace interp::testing {
namespace {

std::unique_ptr<models::Model> TrainOn(const models::Dataset& data,
                                       models::Architecture arch,
                                       std::size_t epochs) {
  models::ModelSpec spec;
  spec.arch = arch;
  spec.vocab = models::BuildVocabulary(data);
  spec.labels = data.labels;
  auto model = models::CreateModel(spec, 0);
  models::TrainConfig config;
  config.epochs = epochs;
  models::Train(*model, data, config);
  return model;
}

}  // namespace

const models::Dataset& SentimentData() {
  static const models::Dataset data = models::MakeSyntheticClassification(0, 2000);
  return data;
}

const models::Dataset& TaggingData() {
  static const models::Dataset data = models::MakeSyntheticTagging(0, 2000);
  return data;
}

const models::Model& SentimentModel() {
  static const auto model = TrainOn(SentimentData(), models::Architecture::kMeanPool, 8);
  return *model;
}

const models::Model& AttentionModel() {
  static const auto model =
      TrainOn(SentimentData(), models::Architecture::kSelfAttention, 4);
  return *model;
}

const models::Model& TaggerModel() {
  static const auto model = TrainOn(TaggingData(), models::Architecture::kTagger, 8);
  return *model;
}

const models::Model& LinearBagSentimentModel() {
  static const auto model = TrainOn(SentimentData(), models::Architecture::kLinearBag, 8);
  return *model;
}

std::unique_ptr<models::Model> RandomModel(models::Architecture arch,
                                           std::uint64_t seed) {
  const auto& data =
      arch == models::Architecture::kTagger ? TaggingData() : SentimentData();
  models::ModelSpec spec;
  spec.arch = arch;
  spec.vocab = models::BuildVocabulary(data);
  spec.labels = data.labels;
  return models::CreateModel(spec, seed);
}

std::unique_ptr<models::Model> RandomLinearBag(std::uint64_t seed,
                                               std::size_t labels) {
  models::ModelSpec spec;
  spec.arch = models::Architecture::kLinearBag;
  spec.vocab = models::BuildVocabulary(SentimentData());
  for (std::size_t i = 0; i < labels; ++i) spec.labels.push_back("c" + std::to_string(i));
  auto model = models::CreateModel(spec, seed);
  Rng rng(seed + 7919);
  for (double& v : model->mutable_parameter("output.bias").mutable_data()) {
    v = rng.Normal(0.0, 0.5);
  }
  return model;
}

double RelativeError(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

double CentralDifference(const std::function<double(double)>& f, double x,
                         double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

bool SameReluPattern(const ad::Tape& a, const ad::Tape& b) {
  if (a.size() != b.size()) return false;
  for (ad::NodeId id = 0; id < a.size(); ++id) {
    const ad::Node& na = a.node(id);
    if (na.kind != ad::OpKind::kRelu) continue;
    const ad::Tensor& xa = a.value(na.inputs[0]);
    const ad::Tensor& xb = b.value(b.node(id).inputs[0]);
    for (std::size_t i = 0; i < xa.size(); ++i) {
      if ((xa[i] > 0.0) != (xb[i] > 0.0)) return false;
    }
  }
  return true;
}

predictor::LabeledInstance FirstInstance(const models::Model& model,
                                         const std::string& text) {
  const auto inst = predictor::MakeInstance(model, text);
  return predictor::LabeledInstancesFor(model, inst).at(0);
}

}  // namespace interp::testing

// interp/models/training.h

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

#ifndef INTERP_MODELS_TRAINING_H_
#define INTERP_MODELS_TRAINING_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "interp/models/datasets.h"
#include "interp/models/model.h"

namespace interp::models {

struct TrainConfig {
  std::size_t epochs = 10;
  double learning_rate = 0.5;
  std::size_t batch_size = 16;
  std::uint64_t seed = 0;
};

struct TrainMetrics {
  std::vector<double> epoch_losses;  // mean training loss per epoch
  double final_train_loss = 0.0;
  /// Classification: example accuracy. Tagging: token accuracy.
  double heldout_accuracy = 0.0;
};

/// Plain minibatch SGD with a seeded shuffle each epoch. The PAD embedding
/// row is never updated. Throws TrainingDivergedError on a non-finite loss.
TrainMetrics Train(Model& model, const Dataset& dataset,
                   const TrainConfig& config);

/// Gold-label loss of one example: cross-entropy for classification, mean
/// per-token cross-entropy for tagging.
ad::Var GoldLoss(ForwardPass& pass, const Example& example);

double Accuracy(const Model& model, const std::vector<Example>& examples);

}  // namespace interp::models

#endif  // INTERP_MODELS_TRAINING_H_

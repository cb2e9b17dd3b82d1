// tests/support/fixtures.h

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

#ifndef INTERP_TESTS_SUPPORT_FIXTURES_H_
#define INTERP_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "interp/autodiff/tape.h"
#include "interp/models/architectures.h"
#include "interp/models/datasets.h"
#include "interp/models/model.h"
#include "interp/predictor/predictor.h"

namespace interp::testing {

// Trained once per process, with the same settings as config/*.json.
const models::Dataset& SentimentData();
const models::Dataset& TaggingData();
const models::Model& SentimentModel();
const models::Model& AttentionModel();
const models::Model& TaggerModel();
const models::Model& LinearBagSentimentModel();

/// Untrained model over the sentiment (or tagging) vocabulary.
std::unique_ptr<models::Model> RandomModel(models::Architecture arch,
                                           std::uint64_t seed);

/// Linear bag-of-embeddings model with Gaussian weights and biases, PAD row
/// zero. `labels` classes.
std::unique_ptr<models::Model> RandomLinearBag(std::uint64_t seed,
                                               std::size_t labels = 2);

/// |a - b| / max(|a|, |b|, floor).
double RelativeError(double a, double b, double floor = 1e-6);

/// (f(x + h) - f(x - h)) / 2h.
double CentralDifference(const std::function<double(double)>& f, double x,
                         double h = 1e-5);

/// True when every ReLU input keeps its sign between two tapes recording the
/// same graph, i.e. central differences between them see a smooth function.
bool SameReluPattern(const ad::Tape& a, const ad::Tape& b);

predictor::LabeledInstance FirstInstance(const models::Model& model,
                                         const std::string& text);

}  // namespace interp::testing

#endif  // INTERP_TESTS_SUPPORT_FIXTURES_H_

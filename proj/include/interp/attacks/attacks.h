// interp/attacks/attacks.h

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

#ifndef INTERP_ATTACKS_ATTACKS_H_
#define INTERP_ATTACKS_ATTACKS_H_

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "interp/predictor/predictor.h"

namespace interp::attacks {

using models::Model;
using predictor::InstancePrediction;
using predictor::LabeledInstance;

struct HotFlipConfig {
  std::size_t max_flips = 5;
  /// Set for the targeted variant.
  std::optional<std::size_t> target_label;
  /// Token ids never swapped in. Unset means DefaultForbiddenTokens.
  std::optional<std::set<std::size_t>> forbidden_tokens;
  /// Candidate feature rows, one per vocabulary entry. Unset means the
  /// model's context-independent matrix.
  std::optional<ad::Tensor> search_matrix;
};

struct ReductionConfig {
  std::size_t max_iterations = 1000;
  /// Only greedy search (1) is implemented.
  std::size_t beam_size = 1;
};

struct AttackStep {
  std::string action;  // "flip" or "remove"
  std::size_t position = 0;
  /// Token swapped in, or the token removed.
  std::string token;
  InstancePrediction prediction;
};

struct AttackResult {
  std::string method;
  std::vector<std::string> original_tokens;
  std::vector<std::string> final_tokens;
  std::vector<AttackStep> trace;
  bool success = false;
  std::size_t steps_used = 0;
};

/// grad . (e_new - e_old): first-order estimate of the loss change when the
/// embedding e_old is replaced by e_new. ShapeError on unequal lengths.
double FirstOrderScore(std::span<const double> grad,
                       std::span<const double> e_old,
                       std::span<const double> e_new);

/// PAD, UNK and every punctuation token.
std::set<std::size_t> DefaultForbiddenTokens(const models::Vocabulary& vocab);

struct Swap {
  std::size_t position = 0;
  std::size_t token = 0;
  double score = 0.0;
};

/// Best single (position, token) replacement by first-order score over every
/// non-protected position and every allowed row of `search_matrix`.
/// Maximizes the score when `increase_loss`, otherwise minimizes it. Ties go
/// to the lower position, then the lower token id. Empty when no candidate
/// exists.
std::optional<Swap> BestSwap(const ad::Tensor& gradients,
                             std::span<const std::size_t> token_ids,
                             const ad::Tensor& search_matrix,
                             const std::set<std::size_t>& forbidden,
                             const std::set<std::size_t>& protected_positions,
                             bool increase_loss);

/// Untargeted: swap tokens until the prediction changes. Targeted: until it
/// equals the target. One swap per iteration; success is decided by a real
/// forward pass. Positions of a tagging instance's own span are not flipped.
AttackResult HotFlip(const Model& model, const LabeledInstance& labeled,
                     const HotFlipConfig& config);

/// Greedily removes the lowest-gradient token while the prediction stays the
/// same; stops at the first removal that would change it. Never goes below
/// one token and never removes a tagging instance's own span.
AttackResult InputReduction(const Model& model, const LabeledInstance& labeled,
                            const ReductionConfig& config);

nlohmann::ordered_json AttackResultToJson(const Model& model,
                                          const AttackResult& result);

}  // namespace interp::attacks

#endif  // INTERP_ATTACKS_ATTACKS_H_

// src/attacks/attacks.cc

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

#include "interp/attacks/attacks.h"

#include <algorithm>

#include "interp/errors.h"
#include "interp/saliency/saliency.h"

namespace interp::attacks {
namespace {

LabeledInstance WithTokens(const Model& model, std::vector<std::string> tokens,
                           std::vector<std::size_t> ids,
                           std::vector<std::size_t> positions,
                           std::size_t label) {
  LabeledInstance out;
  out.instance.tokens = std::move(tokens);
  out.instance.token_ids = std::move(ids);
  out.instance.task = model.task();
  out.label = label;
  out.positions = std::move(positions);
  return out;
}

std::set<std::size_t> ProtectedPositions(const Model& model,
                                         const LabeledInstance& labeled) {
  if (model.task() != models::TaskKind::kTagging) return {};
  return {labeled.positions.begin(), labeled.positions.end()};
}

}  // namespace

double FirstOrderScore(std::span<const double> grad,
                       std::span<const double> e_old,
                       std::span<const double> e_new) {
  if (grad.size() != e_old.size() || grad.size() != e_new.size()) {
    throw ShapeError("first_order_score: lengths " + std::to_string(grad.size()) +
                     ", " + std::to_string(e_old.size()) + " and " +
                     std::to_string(e_new.size()) + " differ");
  }
  double score = 0.0;
  for (std::size_t k = 0; k < grad.size(); ++k) {
    score += grad[k] * (e_new[k] - e_old[k]);
  }
  return score;
}

std::set<std::size_t> DefaultForbiddenTokens(const models::Vocabulary& vocab) {
  std::set<std::size_t> out = {models::Vocabulary::kPad,
                               models::Vocabulary::kUnk};
  for (std::size_t id = 0; id < vocab.size(); ++id) {
    if (models::IsPunctuation(vocab.Token(id))) out.insert(id);
  }
  return out;
}

std::optional<Swap> BestSwap(const ad::Tensor& gradients,
                             std::span<const std::size_t> token_ids,
                             const ad::Tensor& search_matrix,
                             const std::set<std::size_t>& forbidden,
                             const std::set<std::size_t>& protected_positions,
                             bool increase_loss) {
  if (gradients.rows() != token_ids.size() ||
      gradients.cols() != search_matrix.cols()) {
    throw ShapeError("gradients " + ad::ShapeToString(gradients.shape()) +
                     " do not match search matrix " +
                     ad::ShapeToString(search_matrix.shape()));
  }
  const double sign = increase_loss ? 1.0 : -1.0;
  std::optional<Swap> best;
  for (std::size_t pos = 0; pos < token_ids.size(); ++pos) {
    if (protected_positions.count(pos)) continue;
    const std::size_t current = token_ids[pos];
    if (current >= search_matrix.rows()) {
      throw IndexError("token id outside the search matrix");
    }
    const auto grad = gradients.row(pos);
    const auto e_old = search_matrix.row(current);
    for (std::size_t tok = 0; tok < search_matrix.rows(); ++tok) {
      if (tok == current || forbidden.count(tok)) continue;
      const double score = sign * FirstOrderScore(grad, e_old, search_matrix.row(tok));
      if (!best || score > best->score) best = Swap{pos, tok, score};
    }
  }
  if (best) best->score *= sign;
  return best;
}

AttackResult HotFlip(const Model& model, const LabeledInstance& labeled,
                     const HotFlipConfig& config) {
  if (config.max_flips < 1) throw ContractError("max_flips must be >= 1");
  if (config.target_label && *config.target_label >= model.labels().size()) {
    throw ContractError("target label outside the model's label set");
  }
  const ad::Tensor matrix = config.search_matrix
                                ? *config.search_matrix
                                : models::ExtractContextIndependentMatrix(model);
  if (matrix.rows() != model.vocab().size()) {
    throw ShapeError("search matrix needs one row per vocabulary entry");
  }
  const std::set<std::size_t> forbidden =
      config.forbidden_tokens ? *config.forbidden_tokens
                              : DefaultForbiddenTokens(model.vocab());
  const std::set<std::size_t> protect = ProtectedPositions(model, labeled);
  const bool targeted = config.target_label.has_value();

  AttackResult result;
  result.method = targeted ? "hotflip_targeted" : "hotflip";
  result.original_tokens = labeled.instance.tokens;
  std::vector<std::string> tokens = labeled.instance.tokens;
  std::vector<std::size_t> ids = labeled.instance.token_ids;

  const InstancePrediction original = predictor::PredictFor(model, labeled);
  auto succeeded = [&](const InstancePrediction& p) {
    return targeted ? p.Is(*config.target_label) : p.labels != original.labels;
  };
  result.success = succeeded(original);
  const std::size_t loss_label = targeted ? *config.target_label : labeled.label;

  while (!result.success && result.trace.size() < config.max_flips) {
    const LabeledInstance current =
        WithTokens(model, tokens, ids, labeled.positions, loss_label);
    const ad::Tensor grads = predictor::GetGradients(model, current).gradients;
    // Untargeted pushes the current label's loss up; targeted pulls the
    // target's loss down.
    const auto swap = BestSwap(grads, ids, matrix, forbidden, protect, !targeted);
    if (!swap) break;
    ids[swap->position] = swap->token;
    tokens[swap->position] = model.vocab().Token(swap->token);
    AttackStep step;
    step.action = "flip";
    step.position = swap->position;
    step.token = tokens[swap->position];
    step.prediction = predictor::PredictFor(model, ids, labeled.positions);
    result.success = succeeded(step.prediction);
    result.trace.push_back(std::move(step));
  }
  result.final_tokens = std::move(tokens);
  result.steps_used = result.trace.size();
  return result;
}

AttackResult InputReduction(const Model& model, const LabeledInstance& labeled,
                            const ReductionConfig& config) {
  if (config.beam_size != 1) {
    throw ContractError("only greedy input reduction (beam_size 1) is supported");
  }
  AttackResult result;
  result.method = "input_reduction";
  result.original_tokens = labeled.instance.tokens;
  std::vector<std::string> tokens = labeled.instance.tokens;
  std::vector<std::size_t> ids = labeled.instance.token_ids;
  std::vector<std::size_t> positions = labeled.positions;
  const InstancePrediction original = predictor::PredictFor(model, labeled);
  const bool tagging = model.task() == models::TaskKind::kTagging;

  for (std::size_t iter = 0; iter < config.max_iterations && ids.size() > 1;
       ++iter) {
    const LabeledInstance current =
        WithTokens(model, tokens, ids, positions, labeled.label);
    const std::vector<double> norms =
        saliency::RowNorms(predictor::GetGradients(model, current).gradients);
    std::optional<std::size_t> victim;
    for (std::size_t pos = 0; pos < ids.size(); ++pos) {
      if (tagging && std::binary_search(positions.begin(), positions.end(), pos)) {
        continue;
      }
      if (!victim || norms[pos] < norms[*victim]) victim = pos;
    }
    if (!victim) break;

    std::vector<std::size_t> next_ids = ids;
    std::vector<std::string> next_tokens = tokens;
    std::vector<std::size_t> next_positions = positions;
    next_ids.erase(next_ids.begin() + static_cast<long>(*victim));
    next_tokens.erase(next_tokens.begin() + static_cast<long>(*victim));
    for (std::size_t& p : next_positions) {
      if (p > *victim) --p;
    }
    InstancePrediction after =
        predictor::PredictFor(model, next_ids, next_positions);
    if (after.labels != original.labels) break;

    AttackStep step;
    step.action = "remove";
    step.position = *victim;
    step.token = tokens[*victim];
    step.prediction = std::move(after);
    result.trace.push_back(std::move(step));
    ids = std::move(next_ids);
    tokens = std::move(next_tokens);
    positions = std::move(next_positions);
  }
  result.success =
      predictor::PredictFor(model, ids, positions).labels == original.labels;
  result.final_tokens = std::move(tokens);
  result.steps_used = result.trace.size();
  return result;
}

nlohmann::ordered_json AttackResultToJson(const Model& model,
                                          const AttackResult& result) {
  nlohmann::ordered_json j;
  j["method"] = result.method;
  j["original_tokens"] = result.original_tokens;
  j["final_tokens"] = result.final_tokens;
  auto trace = nlohmann::ordered_json::array();
  for (const auto& step : result.trace) {
    nlohmann::ordered_json s;
    s["action"] = step.action;
    s["position"] = step.position;
    s["token"] = step.token;
    s["prediction"] = predictor::InstancePredictionToJson(model, step.prediction);
    s["probabilities"] = step.prediction.probabilities;
    trace.push_back(std::move(s));
  }
  j["trace"] = std::move(trace);
  j["success"] = result.success;
  j["steps_used"] = result.steps_used;
  return j;
}

}  // namespace interp::attacks

// src/saliency/saliency.cc

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

#include "interp/saliency/saliency.h"

#include <cmath>

#include "interp/autodiff/ops.h"
#include "interp/errors.h"
#include "interp/random.h"

namespace interp::saliency {
namespace {

SaliencyMap MakeMap(std::string method, const LabeledInstance& labeled,
                    const ad::Tensor& per_token) {
  SaliencyMap map;
  map.method = std::move(method);
  map.tokens = labeled.instance.tokens;
  map.scores = Normalize(RowNorms(per_token));
  return map;
}

void Accumulate(ad::Tensor& into, const ad::Tensor& g) {
  auto dst = into.mutable_data();
  auto src = g.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

}  // namespace

std::vector<double> Normalize(std::span<const double> raw) {
  double total = 0.0;
  for (double v : raw) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ContractError("saliency scores must be finite and non-negative");
    }
    total += v;
  }
  std::vector<double> out(raw.size());
  if (raw.empty()) return out;
  if (total == 0.0) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(raw.size()));
    return out;
  }
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] / total;
  return out;
}

std::vector<double> RowNorms(const ad::Tensor& gradients) {
  std::vector<double> norms(gradients.rows());
  for (std::size_t r = 0; r < gradients.rows(); ++r) {
    double sq = 0.0;
    for (double v : gradients.row(r)) sq += v * v;
    norms[r] = std::sqrt(sq);
  }
  return norms;
}

double DefaultNoiseScale(const Model& model) {
  double peak = 0.0;
  for (double v : model.parameter("embedding").data()) {
    peak = std::max(peak, std::abs(v));
  }
  return 0.01 * peak;
}

SaliencyMap VanillaGradient(const Model& model, const LabeledInstance& labeled) {
  return MakeMap("vanilla", labeled,
                 predictor::GetGradients(model, labeled).gradients);
}

ad::Tensor IntegratedGradientAttributions(const Model& model,
                                          const LabeledInstance& labeled,
                                          const IGConfig& config) {
  if (config.steps < 1) throw ContractError("integrated gradients needs steps >= 1");
  const ad::Tensor inputs =
      models::EmbedTokens(model, labeled.instance.token_ids);
  ad::Tensor path_sum = ad::Tensor::Zeros(inputs.shape());
  const double steps = static_cast<double>(config.steps);
  for (std::size_t s = 1; s <= config.steps; ++s) {
    const double alpha = static_cast<double>(s) / steps;
    predictor::GradientOptions options;
    // Zero baseline: the path point is alpha * e.
    options.transform = [alpha](const ad::Var& e) { return ad::Scale(e, alpha); };
    Accumulate(path_sum, predictor::GetGradients(model, labeled, options).gradients);
  }
  ad::Tensor attributions = inputs;
  const double inv_steps = 1.0 / steps;
  for (std::size_t i = 0; i < attributions.size(); ++i) {
    attributions[i] = inputs[i] * (path_sum[i] * inv_steps);
  }
  return attributions;
}

SaliencyMap IntegratedGradients(const Model& model,
                                const LabeledInstance& labeled,
                                const IGConfig& config) {
  return MakeMap("integrated", labeled,
                 IntegratedGradientAttributions(model, labeled, config));
}

ad::Tensor SmoothGradGradients(const Model& model, const LabeledInstance& labeled,
                               const SmoothGradConfig& config) {
  if (config.sample_count < 1) {
    throw ContractError("smoothgrad needs sample_count >= 1");
  }
  const double sigma = config.noise_scale.value_or(DefaultNoiseScale(model));
  if (!(sigma >= 0.0)) throw ContractError("smoothgrad noise_scale must be >= 0");
  if (sigma == 0.0) {
    // Every sample is the clean input.
    return predictor::GetGradients(model, labeled).gradients;
  }
  const std::size_t n = labeled.instance.size();
  const std::size_t d = model.embedding_dim();
  Rng rng(config.seed);
  ad::Tensor total = ad::Tensor::Zeros({n, d});
  for (std::size_t s = 0; s < config.sample_count; ++s) {
    ad::Tensor noise = ad::Tensor::Zeros({n, d});
    for (double& v : noise.mutable_data()) v = rng.Normal(0.0, sigma);
    predictor::GradientOptions options;
    options.transform = [&noise](const ad::Var& e) {
      return ad::Add(e, e.tape().Constant(noise));
    };
    Accumulate(total, predictor::GetGradients(model, labeled, options).gradients);
  }
  const double inv = 1.0 / static_cast<double>(config.sample_count);
  for (double& v : total.mutable_data()) v *= inv;
  return total;
}

SaliencyMap SmoothGrad(const Model& model, const LabeledInstance& labeled,
                       const SmoothGradConfig& config) {
  return MakeMap("smoothgrad", labeled,
                 SmoothGradGradients(model, labeled, config));
}

nlohmann::ordered_json SaliencyMapToJson(const Model& model,
                                         const LabeledInstance& labeled,
                                         const SaliencyMap& map) {
  nlohmann::ordered_json j;
  j["method"] = map.method;
  j["tokens"] = map.tokens;
  j["scores"] = map.scores;
  j["instance"] = predictor::LabeledInstanceToJson(model, labeled);
  return j;
}

}  // namespace interp::saliency

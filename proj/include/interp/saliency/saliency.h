// interp/saliency/saliency.h

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

#ifndef INTERP_SALIENCY_SALIENCY_H_
#define INTERP_SALIENCY_SALIENCY_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "interp/predictor/predictor.h"

namespace interp::saliency {

using models::Model;
using predictor::LabeledInstance;

/// Per-token importance. Scores are non-negative and sum to one.
struct SaliencyMap {
  std::string method;
  std::vector<std::string> tokens;
  std::vector<double> scores;
};

struct IGConfig {
  /// Right-endpoint Riemann steps. The baseline is the all-zero embedding
  /// sequence.
  std::size_t steps = 10;
};

struct SmoothGradConfig {
  std::size_t sample_count = 10;
  /// Absolute stddev of the i.i.d. Gaussian noise added to every embedding
  /// coordinate. Unset means DefaultNoiseScale(model).
  std::optional<double> noise_scale;
  std::uint64_t seed = 0;
};

/// Divides by the sum; all-zero input becomes uniform. Throws ContractError
/// on negative or non-finite scores.
std::vector<double> Normalize(std::span<const double> raw);

/// L2 norm of each row.
std::vector<double> RowNorms(const ad::Tensor& gradients);

/// 0.01 times the largest absolute entry of the embedding matrix.
double DefaultNoiseScale(const Model& model);

SaliencyMap VanillaGradient(const Model& model, const LabeledInstance& labeled);

/// Signed attributions (e - e') * mean gradient along the path, [n, d].
/// Summed over all entries they approach L(x) - L(baseline).
ad::Tensor IntegratedGradientAttributions(const Model& model,
                                          const LabeledInstance& labeled,
                                          const IGConfig& config);
SaliencyMap IntegratedGradients(const Model& model,
                                const LabeledInstance& labeled,
                                const IGConfig& config);

/// Mean embedding gradient over noisy copies of the input, [n, d].
ad::Tensor SmoothGradGradients(const Model& model, const LabeledInstance& labeled,
                               const SmoothGradConfig& config);
SaliencyMap SmoothGrad(const Model& model, const LabeledInstance& labeled,
                       const SmoothGradConfig& config);

/// Extension point: a saliency method is anything that maps a model and a
/// labeled instance to a map.
class SaliencyInterpreter {
 public:
  virtual ~SaliencyInterpreter() = default;
  virtual std::string_view name() const = 0;
  virtual SaliencyMap Interpret(const Model& model,
                                const LabeledInstance& labeled) const = 0;
};

class VanillaGradientInterpreter : public SaliencyInterpreter {
 public:
  std::string_view name() const override { return "vanilla"; }
  SaliencyMap Interpret(const Model& model,
                        const LabeledInstance& labeled) const override {
    return VanillaGradient(model, labeled);
  }
};

class IntegratedGradientsInterpreter : public SaliencyInterpreter {
 public:
  explicit IntegratedGradientsInterpreter(IGConfig config) : config_(config) {}
  std::string_view name() const override { return "integrated"; }
  SaliencyMap Interpret(const Model& model,
                        const LabeledInstance& labeled) const override {
    return IntegratedGradients(model, labeled, config_);
  }

 private:
  IGConfig config_;
};

class SmoothGradInterpreter : public SaliencyInterpreter {
 public:
  explicit SmoothGradInterpreter(SmoothGradConfig config) : config_(config) {}
  std::string_view name() const override { return "smoothgrad"; }
  SaliencyMap Interpret(const Model& model,
                        const LabeledInstance& labeled) const override {
    return SmoothGrad(model, labeled, config_);
  }

 private:
  SmoothGradConfig config_;
};

/// {"method", "tokens", "scores", "instance"}.
nlohmann::ordered_json SaliencyMapToJson(const Model& model,
                                         const LabeledInstance& labeled,
                                         const SaliencyMap& map);

}  // namespace interp::saliency

#endif  // INTERP_SALIENCY_SALIENCY_H_

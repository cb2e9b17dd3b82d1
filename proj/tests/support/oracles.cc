// tests/support/oracles.cc

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

#include "oracles.h"

#include <algorithm>
#include <cmath>

#include "fixtures.h"
#include "interp/attacks/attacks.h"
#include "interp/saliency/saliency.h"

namespace interp::testing {
namespace {

using ad::Shape;
using ad::Tape;
using ad::Tensor;
using ad::Var;

Tensor RandomTensor(Rng& rng, Shape shape, double lo = -2.0, double hi = 2.0) {
  std::vector<double> data(ad::NumElements(shape));
  for (double& v : data) v = lo + (hi - lo) * rng.Uniform();
  return Tensor(std::move(shape), std::move(data));
}

std::vector<std::size_t> RandomIds(Rng& rng, const models::Model& model,
                                   std::size_t max_len = 8) {
  std::vector<std::size_t> ids(1 + rng.UniformInt(max_len));
  for (auto& id : ids) id = 2 + rng.UniformInt(model.vocab().size() - 2);
  return ids;
}

// Loss of a random target for a random input.
predictor::LabeledInstance RandomProbe(Rng& rng, const models::Model& model) {
  predictor::LabeledInstance labeled;
  labeled.instance.token_ids = RandomIds(rng, model);
  for (auto id : labeled.instance.token_ids) {
    labeled.instance.tokens.push_back(model.vocab().Token(id));
  }
  labeled.instance.task = model.task();
  labeled.label = rng.UniformInt(model.labels().size());
  if (model.task() == models::TaskKind::kTagging) {
    const std::size_t n = labeled.instance.size();
    const std::size_t start = rng.UniformInt(n);
    const std::size_t len = 1 + rng.UniformInt(n - start);
    for (std::size_t i = start; i < start + len; ++i) labeled.positions.push_back(i);
  }
  return labeled;
}

// Loss with an optional additive perturbation of the embedding-stage output.
double LossWithDelta(const models::Model& model, const predictor::LabeledInstance& labeled,
                     const Tensor* delta) {
  models::ForwardPass pass(model);
  if (delta) {
    pass.SetEmbeddingTransform(
        [&](const Var& e) { return ad::Add(e, pass.tape().Constant(*delta)); });
  }
  return predictor::InstanceLoss(pass, labeled).value().item();
}

bool Contains(const std::vector<std::string>& list, const std::string& w) {
  return std::find(list.begin(), list.end(), w) != list.end();
}

}  // namespace

std::vector<OpCase> AllOps() {
  auto away_from_zero = [](std::size_t, Tensor& t) {
    for (double& v : t.mutable_data()) {
      if (std::abs(v) < 0.05) v = v < 0 ? -0.05 : 0.05;
    }
  };
  auto probabilities = [](std::size_t, Tensor& t) {
    for (double& v : t.mutable_data()) v = 0.05 + 0.2 * (v + 2.0);
  };
  using V = const std::vector<Var>;
  return {
      {"add", {{3, 4}, {3, 4}}, [](Tape&, V& v) { return ad::Add(v[0], v[1]); }, {}},
      {"add_scalar", {{3, 4}, {1}}, [](Tape&, V& v) { return ad::Add(v[0], v[1]); }, {}},
      {"sub", {{3, 4}, {3, 4}}, [](Tape&, V& v) { return ad::Sub(v[0], v[1]); }, {}},
      {"mul", {{3, 4}, {3, 4}}, [](Tape&, V& v) { return ad::Mul(v[0], v[1]); }, {}},
      {"mul_scalar", {{1}, {2, 3}}, [](Tape&, V& v) { return ad::Mul(v[0], v[1]); }, {}},
      {"matmul", {{3, 4}, {4, 2}}, [](Tape&, V& v) { return ad::MatMul(v[0], v[1]); }, {}},
      {"relu", {{3, 4}}, [](Tape&, V& v) { return ad::Relu(v[0]); }, away_from_zero},
      {"tanh", {{3, 4}}, [](Tape&, V& v) { return ad::Tanh(v[0]); }, {}},
      {"mean", {{3, 4}}, [](Tape&, V& v) { return ad::Mean(v[0]); }, {}},
      {"mean_rows", {{3, 4}}, [](Tape&, V& v) { return ad::MeanRows(v[0]); }, {}},
      {"sum", {{3, 4}}, [](Tape&, V& v) { return ad::Sum(v[0]); }, {}},
      {"concat_rows", {{2, 3}, {1, 3}},
       [](Tape&, V& v) { return ad::Concat(std::span<const Var>(v), 0); }, {}},
      {"concat_cols", {{2, 3}, {2, 1}, {2, 2}},
       [](Tape&, V& v) { return ad::Concat(std::span<const Var>(v), 1); }, {}},
      {"scale", {{3, 4}}, [](Tape&, V& v) { return ad::Scale(v[0], -1.75); }, {}},
      {"transpose", {{3, 4}}, [](Tape&, V& v) { return ad::Transpose(v[0]); }, {}},
      {"softmax_rows", {{3, 4}}, [](Tape&, V& v) { return ad::Softmax(v[0], 1); }, {}},
      {"softmax_cols", {{3, 4}}, [](Tape&, V& v) { return ad::Softmax(v[0], 0); }, {}},
      {"cross_entropy", {{1, 5}},
       [](Tape&, V& v) { return ad::CrossEntropy(v[0], 3); }, probabilities},
      {"gather_rows", {{5, 3}},
       [](Tape&, V& v) {
         const std::vector<std::size_t> idx = {4, 1, 4, 0};
         return ad::GatherRows(v[0], idx);
       },
       {}},
  };
}

double OpMaxRelativeError(const OpCase& op, Rng& rng) {
  std::vector<Tensor> inputs;
  for (std::size_t k = 0; k < op.input_shapes.size(); ++k) {
    inputs.push_back(RandomTensor(rng, op.input_shapes[k]));
    if (op.condition) op.condition(k, inputs.back());
  }
  Tensor r;
  {
    Tape probe;
    std::vector<Var> vars;
    for (const auto& t : inputs) vars.push_back(probe.Constant(t));
    r = RandomTensor(rng, op.build(probe, vars).shape());
  }
  auto evaluate = [&](const std::vector<Tensor>& xs) {
    Tape tape;
    std::vector<Var> vars;
    for (const auto& t : xs) vars.push_back(tape.Constant(t));
    const Tensor out = op.build(tape, vars).value();
    double total = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) total += out[i] * r[i];
    return total;
  };

  Tape tape;
  std::vector<Var> vars;
  for (const auto& t : inputs) vars.push_back(tape.Parameter(t));
  const ad::Gradients grads =
      tape.Backward(ad::Sum(ad::Mul(op.build(tape, vars), tape.Constant(r))));

  double worst = 0.0;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const Tensor& g = grads.At(vars[k]);
    for (std::size_t i = 0; i < inputs[k].size(); ++i) {
      auto f = [&](double x) {
        std::vector<Tensor> xs = inputs;
        xs[k][i] = x;
        return evaluate(xs);
      };
      worst = std::max(worst, RelativeError(g[i], CentralDifference(f, inputs[k][i])));
    }
  }
  return worst;
}

double EmbeddingGradientError(models::Architecture arch, std::uint64_t seed, int draws) {
  Rng rng(seed);
  double worst = 0.0;
  for (int draw = 0; draw < draws; ++draw) {
    const auto model = RandomModel(arch, draw);
    const auto labeled = RandomProbe(rng, *model);
    const auto record = predictor::GetGradients(*model, labeled);
    Tensor delta = Tensor::Zeros(record.gradients.shape());
    for (std::size_t i = 0; i < delta.size(); ++i) {
      auto f = [&](double x) {
        delta[i] = x;
        const double v = LossWithDelta(*model, labeled, &delta);
        delta[i] = 0.0;
        return v;
      };
      worst = std::max(worst, RelativeError(record.gradients[i], CentralDifference(f, 0.0)));
    }
  }
  return worst;
}

double ParameterGradientError(models::Architecture arch, std::uint64_t seed, int draws) {
  Rng rng(seed);
  double worst = 0.0;
  for (int draw = 0; draw < draws; ++draw) {
    const auto model = RandomModel(arch, draw);
    const auto labeled = RandomProbe(rng, *model);
    auto shifted = [&](const models::ParameterSet& direction, double t) {
      auto copy = model->Clone();
      for (auto& [name, value] : copy->mutable_parameters()) {
        const Tensor& v = direction.at(name);
        for (std::size_t i = 0; i < value.size(); ++i) value[i] += t * v[i];
      }
      return copy;
    };
    models::ParameterSet direction;
    for (bool smooth = false; !smooth;) {
      direction.clear();
      for (const auto& [name, value] : model->parameters()) {
        Tensor v = value;
        for (double& x : v.mutable_data()) x = rng.Normal();
        direction.emplace(name, std::move(v));
      }
      const auto lo = shifted(direction, -1e-5);
      const auto hi = shifted(direction, 1e-5);
      models::ForwardPass lo_pass(*lo), hi_pass(*hi);
      predictor::InstanceLoss(lo_pass, labeled);
      predictor::InstanceLoss(hi_pass, labeled);
      smooth = SameReluPattern(lo_pass.tape(), hi_pass.tape());
    }
    models::ForwardPass pass(*model, /*trainable=*/true);
    const auto grads = pass.tape().Backward(predictor::InstanceLoss(pass, labeled));
    double analytic = 0.0;
    for (const auto& [name, v] : direction) {
      const Tensor& g = grads.At(pass.Param(name));
      for (std::size_t i = 0; i < g.size(); ++i) analytic += g[i] * v[i];
    }
    auto f = [&](double t) { return LossWithDelta(*shifted(direction, t), labeled, nullptr); };
    worst = std::max(worst, RelativeError(analytic, CentralDifference(f, 0.0)));
  }
  return worst;
}

std::string LexiconTag(const std::vector<std::string>& tokens, std::size_t i) {
  const auto& lex = models::GetTaggingLexicon();
  const auto& w = tokens[i];
  for (const char* tag : {"LOC", "PER", "ORG"}) {
    if (Contains(lex.single.at(tag), w) || Contains(lex.first.at(tag), w) ||
        Contains(lex.second.at(tag), w)) {
      return tag;
    }
  }
  if (Contains(lex.ambiguous, w) && i > 0) {
    for (const char* tag : {"LOC", "PER", "ORG"}) {
      if (Contains(lex.triggers.at(tag), tokens[i - 1])) return tag;
    }
  }
  return "O";
}

BruteForceSwap ExhaustiveBestSwap(const models::Model& model,
                                  const predictor::LabeledInstance& labeled, bool increase) {
  const auto forbidden = attacks::DefaultForbiddenTokens(model.vocab());
  BruteForceSwap best;
  bool found = false;
  for (std::size_t pos = 0; pos < labeled.instance.size(); ++pos) {
    for (std::size_t token = 0; token < model.vocab().size(); ++token) {
      if (forbidden.count(token) || token == labeled.instance.token_ids[pos]) continue;
      predictor::LabeledInstance swapped = labeled;
      swapped.instance.token_ids[pos] = token;
      const double loss = predictor::InstanceLossValue(model, swapped);
      if (!found || (increase ? loss > best.loss : loss < best.loss)) {
        best = {pos, token, loss};
        found = true;
      }
    }
  }
  return best;
}

OffsetLogits::OffsetLogits(const Model& inner, std::size_t row, double amount)
    : Model(inner.spec()), inner_(inner), row_(row), amount_(amount) {
  params_ = inner.parameters();
}

std::unique_ptr<models::Model> OffsetLogits::Clone() const {
  return std::make_unique<OffsetLogits>(*this);
}

ad::Var OffsetLogits::Embed(models::ForwardPass& pass, std::span<const std::size_t> ids) const {
  return inner_.Embed(pass, ids);
}

ad::Var OffsetLogits::Logits(models::ForwardPass& pass, const ad::Var& embedded) const {
  const Var logits = inner_.Logits(pass, embedded);
  Tensor offset = Tensor::Zeros(logits.shape());
  for (std::size_t c = 0; c < offset.cols(); ++c) offset.at(row_, c) = amount_ * (c + 1.0);
  return ad::Add(logits, pass.tape().Constant(offset));
}

ad::Tensor OffsetLogits::ContextIndependentMatrix() const {
  return inner_.ContextIndependentMatrix();
}

predictor::GradientOptions ZeroEmbeddings() {
  predictor::GradientOptions options;
  options.transform = [](const Var& e) { return ad::Scale(e, 0.0); };
  return options;
}

double CompletenessGap(const models::Model& model, const predictor::LabeledInstance& labeled,
                       std::size_t steps) {
  const Tensor a = saliency::IntegratedGradientAttributions(model, labeled, {steps});
  double total = 0.0;
  for (double v : a.data()) total += v;
  return total - (predictor::InstanceLossValue(model, labeled) -
                  predictor::InstanceLossValue(model, labeled, ZeroEmbeddings()));
}

}  // namespace interp::testing

// src/models/architectures.cc

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

#include "interp/models/architectures.h"

#include <algorithm>
#include <cmath>

#include "interp/errors.h"
#include "interp/random.h"

namespace interp::models {
namespace {

ad::Var Lookup(ForwardPass& pass, std::span<const std::size_t> ids) {
  return ad::GatherRows(pass.Param("embedding"), ids);
}

ad::Var Dense(ForwardPass& pass, const ad::Var& x, const std::string& name) {
  return AddRowBias(pass.tape(), ad::MatMul(x, pass.Param(name + ".weight")),
                    pass.Param(name + ".bias"));
}

ad::Var MlpHead(ForwardPass& pass, const ad::Var& features) {
  return Dense(pass, ad::Relu(Dense(pass, features, "hidden")), "output");
}

// tanh(E W + b) for every row of E.
ad::Tensor ProjectRows(const ad::Tensor& rows, const ad::Tensor& weight,
                       const ad::Tensor& bias) {
  ad::Tensor out = ad::Tensor::Zeros({rows.rows(), weight.cols()});
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    for (std::size_t c = 0; c < weight.cols(); ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < weight.rows(); ++k) {
        acc += rows.at(r, k) * weight.at(k, c);
      }
      out.at(r, c) = std::tanh(acc + bias[c]);
    }
  }
  return out;
}

// [n, n] matrix that moves row i to row i + offset, dropping rows that fall
// off either end.
ad::Tensor ShiftMatrix(std::size_t n, int offset) {
  ad::Tensor s = ad::Tensor::Zeros({n, n});
  for (std::size_t i = 0; i < n; ++i) {
    const long src = static_cast<long>(i) - offset;
    if (src >= 0 && src < static_cast<long>(n)) {
      s.at(i, static_cast<std::size_t>(src)) = 1.0;
    }
  }
  return s;
}

struct ParamShape {
  std::string name;
  std::size_t rows, cols;
};

std::vector<ParamShape> ParameterShapes(const ModelSpec& spec) {
  const std::size_t v = spec.vocab.size();
  const std::size_t d = spec.embedding_dim;
  const std::size_t h = spec.hidden_dim;
  const std::size_t l = spec.labels.size();
  std::vector<ParamShape> shapes = {{"embedding", v, d}};
  switch (spec.arch) {
    case Architecture::kLinearBag:
      shapes.push_back({"output.weight", d, l});
      shapes.push_back({"output.bias", 1, l});
      return shapes;
    case Architecture::kSelfAttention:
      shapes.push_back({"project.weight", d, d});
      shapes.push_back({"project.bias", 1, d});
      shapes.push_back({"query.weight", d, d});
      shapes.push_back({"key.weight", d, d});
      shapes.push_back({"value.weight", d, d});
      [[fallthrough]];
    case Architecture::kMeanPool:
      shapes.push_back({"hidden.weight", d, h});
      break;
    case Architecture::kTagger:
      shapes.push_back({"hidden.weight", 3 * d, h});
      break;
  }
  shapes.push_back({"hidden.bias", 1, h});
  shapes.push_back({"output.weight", h, l});
  shapes.push_back({"output.bias", 1, l});
  return shapes;
}

void ValidateSpec(const ModelSpec& spec) {
  if (spec.embedding_dim == 0 || spec.hidden_dim == 0) {
    throw ContractError("model dimensions must be positive");
  }
  if (spec.labels.size() < 2) {
    throw ContractError("a model needs at least two labels");
  }
}

}  // namespace

std::unique_ptr<Model> LinearBagModel::Clone() const {
  return std::make_unique<LinearBagModel>(*this);
}

ad::Var LinearBagModel::Embed(ForwardPass& pass,
                              std::span<const std::size_t> ids) const {
  return Lookup(pass, ids);
}

ad::Var LinearBagModel::Logits(ForwardPass& pass,
                               const ad::Var& embedded) const {
  return Dense(pass, ad::MeanRows(embedded), "output");
}

ad::Tensor LinearBagModel::ContextIndependentMatrix() const {
  return parameter("embedding");
}

std::unique_ptr<Model> MeanPoolClassifier::Clone() const {
  return std::make_unique<MeanPoolClassifier>(*this);
}

ad::Var MeanPoolClassifier::Embed(ForwardPass& pass,
                                  std::span<const std::size_t> ids) const {
  return Lookup(pass, ids);
}

ad::Var MeanPoolClassifier::Logits(ForwardPass& pass,
                                   const ad::Var& embedded) const {
  return MlpHead(pass, ad::MeanRows(embedded));
}

ad::Tensor MeanPoolClassifier::ContextIndependentMatrix() const {
  return parameter("embedding");
}

std::unique_ptr<Model> SelfAttentionClassifier::Clone() const {
  return std::make_unique<SelfAttentionClassifier>(*this);
}

ad::Var SelfAttentionClassifier::Embed(ForwardPass& pass,
                                       std::span<const std::size_t> ids) const {
  return ad::Tanh(Dense(pass, Lookup(pass, ids), "project"));
}

ad::Var SelfAttentionClassifier::Logits(ForwardPass& pass,
                                        const ad::Var& embedded) const {
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(embedding_dim()));
  ad::Var query = ad::MatMul(embedded, pass.Param("query.weight"));
  ad::Var key = ad::MatMul(embedded, pass.Param("key.weight"));
  ad::Var value = ad::MatMul(embedded, pass.Param("value.weight"));
  ad::Var scores = ad::Scale(ad::MatMul(query, ad::Transpose(key)), inv_sqrt_d);
  ad::Var attended = ad::MatMul(ad::Softmax(scores, 1), value);
  return MlpHead(pass, ad::MeanRows(attended));
}

ad::Tensor SelfAttentionClassifier::ContextIndependentMatrix() const {
  return ProjectRows(parameter("embedding"), parameter("project.weight"),
                     parameter("project.bias"));
}

std::unique_ptr<Model> TokenTagger::Clone() const {
  return std::make_unique<TokenTagger>(*this);
}

ad::Var TokenTagger::Embed(ForwardPass& pass,
                           std::span<const std::size_t> ids) const {
  return Lookup(pass, ids);
}

ad::Var TokenTagger::Logits(ForwardPass& pass, const ad::Var& embedded) const {
  const std::size_t n = embedded.value().rows();
  ad::Tape& tape = pass.tape();
  const ad::Var parts[] = {
      ad::MatMul(tape.Constant(ShiftMatrix(n, 1)), embedded),
      embedded,
      ad::MatMul(tape.Constant(ShiftMatrix(n, -1)), embedded),
  };
  return MlpHead(pass, ad::Concat(parts, 1));
}

ad::Tensor TokenTagger::ContextIndependentMatrix() const {
  return parameter("embedding");
}

std::unique_ptr<Model> CreateEmptyModel(ModelSpec spec) {
  ValidateSpec(spec);
  const auto shapes = ParameterShapes(spec);
  std::unique_ptr<Model> model;
  switch (spec.arch) {
    case Architecture::kLinearBag:
      model = std::make_unique<LinearBagModel>(std::move(spec));
      break;
    case Architecture::kMeanPool:
      model = std::make_unique<MeanPoolClassifier>(std::move(spec));
      break;
    case Architecture::kSelfAttention:
      model = std::make_unique<SelfAttentionClassifier>(std::move(spec));
      break;
    case Architecture::kTagger:
      model = std::make_unique<TokenTagger>(std::move(spec));
      break;
  }
  for (const auto& s : shapes) {
    model->mutable_parameters().emplace(s.name, ad::Tensor::Zeros({s.rows, s.cols}));
  }
  return model;
}

std::unique_ptr<Model> CreateModel(ModelSpec spec, std::uint64_t seed) {
  auto model = CreateEmptyModel(std::move(spec));
  Rng rng(seed);
  for (auto& [name, value] : model->mutable_parameters()) {
    if (name.ends_with(".bias")) continue;
    const std::size_t fan_in = name == "embedding" ? value.cols() : value.rows();
    const double stddev = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (double& v : value.mutable_data()) v = rng.Normal(0.0, stddev);
  }
  auto row = model->mutable_parameter("embedding").mutable_row(Vocabulary::kPad);
  std::fill(row.begin(), row.end(), 0.0);
  return model;
}

}  // namespace interp::models

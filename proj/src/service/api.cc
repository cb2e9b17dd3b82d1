// src/service/api.cc

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

#include "interp/service/api.h"

#include <algorithm>

#include "interp/attacks/attacks.h"
#include "interp/errors.h"
#include "interp/models/checkpoint.h"
#include "interp/predictor/predictor.h"
#include "interp/saliency/saliency.h"

namespace interp::service {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const std::map<std::string, std::vector<std::string>, std::less<>> kMethodKeys = {
    {"vanilla", {}},
    {"integrated", {"steps"}},
    {"smoothgrad", {"samples", "sigma", "seed"}},
    {"hotflip", {"max_flips"}},
    {"hotflip_targeted", {"max_flips", "target_label"}},
    {"input_reduction", {"max_iterations"}},
};

const std::string& RequireString(const json& request, const char* key) {
  if (!request.contains(key)) {
    throw SchemaError(std::string("missing field \"") + key + "\"");
  }
  if (!request[key].is_string()) {
    throw SchemaError(std::string("field \"") + key + "\" must be a string");
  }
  return request[key].get_ref<const std::string&>();
}

void RequireObject(const json& request) {
  if (!request.is_object()) throw SchemaError("request body must be a JSON object");
}

// Defaults for `method` overlaid with the request's "config".
json MergedConfig(const std::string& method, const json& request,
                  const MethodDefaults& defaults) {
  const auto& allowed = kMethodKeys.at(method);
  json merged = json::object();
  if (defaults.configs.contains(method)) merged = defaults.configs[method];
  if (request.contains("config")) {
    const json& overrides = request["config"];
    if (!overrides.is_object()) throw SchemaError("\"config\" must be an object");
    for (const auto& [key, value] : overrides.items()) merged[key] = value;
  }
  for (const auto& [key, value] : merged.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw SchemaError("unknown config key \"" + key + "\" for method " + method);
    }
  }
  return merged;
}

std::uint64_t GetCount(const json& cfg, const char* key, std::uint64_t fallback,
                       std::uint64_t minimum) {
  if (!cfg.contains(key)) return fallback;
  const json& v = cfg[key];
  if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(minimum)) {
    throw SchemaError(std::string("config \"") + key + "\" must be an integer >= " +
                      std::to_string(minimum));
  }
  return v.get<std::uint64_t>();
}

predictor::PredictResult ParseInput(const Model& model, const json& request,
                                    const Limits& limits) {
  RequireObject(request);
  RequireString(request, "input");
  predictor::PredictResult result = predictor::PredictJson(model, request);
  if (result.instance.size() > limits.max_tokens) {
    throw InputTooLongError("input has " + std::to_string(result.instance.size()) +
                            " tokens; the limit is " +
                            std::to_string(limits.max_tokens));
  }
  return result;
}

std::string MethodOf(const json& request, std::initializer_list<const char*> valid) {
  const std::string& method = RequireString(request, "method");
  for (const char* m : valid) {
    if (method == m) return method;
  }
  throw SchemaError("unknown method \"" + method + "\"");
}

std::unique_ptr<saliency::SaliencyInterpreter> MakeInterpreter(
    const std::string& method, const json& cfg) {
  if (method == "vanilla") {
    return std::make_unique<saliency::VanillaGradientInterpreter>();
  }
  if (method == "integrated") {
    saliency::IGConfig ig;
    ig.steps = GetCount(cfg, "steps", ig.steps, 1);
    return std::make_unique<saliency::IntegratedGradientsInterpreter>(ig);
  }
  saliency::SmoothGradConfig sg;
  sg.sample_count = GetCount(cfg, "samples", sg.sample_count, 1);
  sg.seed = GetCount(cfg, "seed", sg.seed, 0);
  if (cfg.contains("sigma")) {
    if (!cfg["sigma"].is_number() || cfg["sigma"].get<double>() < 0.0) {
      throw SchemaError("config \"sigma\" must be a number >= 0");
    }
    sg.noise_scale = cfg["sigma"].get<double>();
  }
  return std::make_unique<saliency::SmoothGradInterpreter>(sg);
}

// Runs `fn` on the selected labeled instances and shapes the answer.
template <typename F>
ordered_json ForInstances(const Model& model, const json& request,
                          const predictor::PredictResult& predicted, F fn) {
  const auto labeled = predictor::PredictionsToLabeledInstances(
      model, predicted.instance, predicted.prediction);
  if (request.contains("instance_index")) {
    const json& idx = request["instance_index"];
    if (!idx.is_number_integer() || idx.get<long long>() < 0) {
      throw SchemaError("\"instance_index\" must be a non-negative integer");
    }
    const auto i = idx.get<std::size_t>();
    if (i >= labeled.size()) {
      throw SchemaError("\"instance_index\" " + std::to_string(i) +
                        " out of range; the prediction has " +
                        std::to_string(labeled.size()) + " instances");
    }
    return fn(labeled[i]);
  }
  if (model.task() == models::TaskKind::kClassification) return fn(labeled.front());
  ordered_json out = ordered_json::array();
  for (const auto& li : labeled) out.push_back(fn(li));
  return out;
}

}  // namespace

void ModelRegistry::Add(const std::string& name,
                        const std::filesystem::path& checkpoint) {
  std::shared_ptr<const Model> model;
  try {
    model = models::LoadCheckpoint(checkpoint);
  } catch (const Error& e) {
    throw ConfigError("model \"" + name + "\": cannot load " +
                      checkpoint.string() + ": " + e.what());
  }
  Add(name, std::move(model));
}

void ModelRegistry::Add(const std::string& name,
                        std::shared_ptr<const Model> model) {
  if (name.empty()) throw ConfigError("model names must be non-empty");
  if (!models_.emplace(name, std::move(model)).second) {
    throw ConfigError("model \"" + name + "\" is registered twice");
  }
}

const Model& ModelRegistry::Get(std::string_view name) const {
  auto it = models_.find(name);
  if (it == models_.end()) throw UnknownModelError("unknown model");
  return *it->second;
}

ordered_json ModelRegistry::List() const {
  ordered_json out = ordered_json::array();
  for (const auto& [name, model] : models_) {
    ordered_json entry;
    entry["name"] = name;
    entry["task"] = models::TaskName(model->task());
    entry["labels"] = model->labels();
    out.push_back(std::move(entry));
  }
  return out;
}

MethodDefaults MethodDefaults::BuiltIn() {
  MethodDefaults d;
  d.configs = {
      {"integrated", {{"steps", 10}}},
      {"smoothgrad", {{"samples", 10}, {"seed", 0}}},
      {"hotflip", {{"max_flips", 5}}},
      {"hotflip_targeted", {{"max_flips", 5}}},
      {"input_reduction", {{"max_iterations", 1000}}},
  };
  return d;
}

ordered_json PredictPayload(const Model& model, const json& request,
                            const Limits& limits) {
  const auto result = ParseInput(model, request, limits);
  return predictor::PredictionToJson(model, result.instance, result.prediction);
}

ordered_json InterpretPayload(const Model& model, const json& request,
                              const MethodDefaults& defaults,
                              const Limits& limits) {
  RequireObject(request);
  const std::string method =
      MethodOf(request, {"vanilla", "integrated", "smoothgrad"});
  const auto interpreter = MakeInterpreter(method, MergedConfig(method, request, defaults));
  const auto predicted = ParseInput(model, request, limits);
  return ForInstances(model, request, predicted,
                      [&](const predictor::LabeledInstance& li) {
                        return saliency::SaliencyMapToJson(
                            model, li, interpreter->Interpret(model, li));
                      });
}

ordered_json AttackPayload(const Model& model, const json& request,
                           const MethodDefaults& defaults, const Limits& limits) {
  RequireObject(request);
  const std::string method =
      MethodOf(request, {"hotflip", "hotflip_targeted", "input_reduction"});
  const json cfg = MergedConfig(method, request, defaults);
  attacks::HotFlipConfig flip;
  attacks::ReductionConfig reduce;
  if (method == "input_reduction") {
    reduce.max_iterations = GetCount(cfg, "max_iterations", reduce.max_iterations, 1);
  } else {
    flip.max_flips = GetCount(cfg, "max_flips", flip.max_flips, 1);
  }
  if (method == "hotflip_targeted") {
    if (!cfg.contains("target_label")) {
      throw SchemaError("hotflip_targeted needs config \"target_label\"");
    }
    if (!cfg["target_label"].is_string()) {
      throw SchemaError("\"target_label\" must be a label name");
    }
    const auto& labels = model.labels();
    const auto name = cfg["target_label"].get<std::string>();
    auto it = std::find(labels.begin(), labels.end(), name);
    if (it == labels.end()) {
      throw SchemaError("unknown target label \"" + name + "\"");
    }
    flip.target_label = static_cast<std::size_t>(it - labels.begin());
  }
  const auto predicted = ParseInput(model, request, limits);
  return ForInstances(model, request, predicted,
                      [&](const predictor::LabeledInstance& li) {
                        const attacks::AttackResult r =
                            method == "input_reduction"
                                ? attacks::InputReduction(model, li, reduce)
                                : attacks::HotFlip(model, li, flip);
                        return attacks::AttackResultToJson(model, r);
                      });
}

Response ErrorResponse(const std::exception& error) {
  int status = 500;
  std::string message = "internal error";
  if (dynamic_cast<const UnknownModelError*>(&error)) {
    status = 404;
    message = "unknown model";
  } else if (dynamic_cast<const PayloadTooLargeError*>(&error)) {
    status = 413;
    message = error.what();
  } else if (dynamic_cast<const EmptyInputError*>(&error) ||
             dynamic_cast<const InputTooLongError*>(&error)) {
    status = 422;
    message = error.what();
  } else if (dynamic_cast<const SchemaError*>(&error) ||
             dynamic_cast<const ContractError*>(&error) ||
             dynamic_cast<const IndexError*>(&error)) {
    status = 400;
    message = error.what();
  } else if (dynamic_cast<const nlohmann::json::exception*>(&error)) {
    status = 400;
    message = "malformed JSON body";
  }
  return {status, ordered_json{{"error", message}}.dump()};
}

Response Service::Handle(std::string_view method, std::string_view path,
                         std::string_view body) const {
  try {
    if (path == "/models") {
      if (method != "GET") return {405, R"({"error":"method not allowed"})"};
      return {200, registry_->List().dump()};
    }
    if (path != "/predict" && path != "/interpret" && path != "/attack") {
      return {404, R"({"error":"not found"})"};
    }
    if (method != "POST") return {405, R"({"error":"method not allowed"})"};
    if (body.size() > limits_.max_request_bytes) {
      throw PayloadTooLargeError("request body exceeds " +
                                 std::to_string(limits_.max_request_bytes) +
                                 " bytes");
    }
    json request = json::parse(body);
    RequireObject(request);
    const Model& model = registry_->Get(RequireString(request, "model"));
    request.erase("model");
    ordered_json payload;
    if (path == "/predict") {
      payload = PredictPayload(model, request, limits_);
    } else if (path == "/interpret") {
      payload = InterpretPayload(model, request, defaults_, limits_);
    } else {
      payload = AttackPayload(model, request, defaults_, limits_);
    }
    return {200, payload.dump()};
  } catch (const std::exception& e) {
    return ErrorResponse(e);
  }
}

}  // namespace interp::service

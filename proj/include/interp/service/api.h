// interp/service/api.h

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

#ifndef INTERP_SERVICE_API_H_
#define INTERP_SERVICE_API_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "interp/models/model.h"

namespace interp::service {

using models::Model;

/// Named, immutable models. Entries are loaded when added, so a registry
/// that exists is a registry whose checkpoints all load.
class ModelRegistry {
 public:
  /// Throws ConfigError naming the entry when the checkpoint does not load
  /// or the name is taken.
  void Add(const std::string& name, const std::filesystem::path& checkpoint);
  void Add(const std::string& name, std::shared_ptr<const Model> model);

  /// Throws UnknownModelError.
  const Model& Get(std::string_view name) const;
  bool empty() const { return models_.empty(); }

  /// [{"name", "task", "labels"}] ordered by name.
  nlohmann::ordered_json List() const;

 private:
  std::map<std::string, std::shared_ptr<const Model>, std::less<>> models_;
};

/// Per-method default configs, e.g. {"integrated": {"steps": 10}}. Request
/// configs override them key by key.
struct MethodDefaults {
  nlohmann::json configs = nlohmann::json::object();
  static MethodDefaults BuiltIn();
};

struct Limits {
  std::size_t max_request_bytes = 10 * 1024;
  std::size_t max_tokens = 256;
};

// Payload builders shared by the CLI and the HTTP service. Requests are the
// JSON bodies documented in the README minus the "model" field.
//   predict:   {"input"}
//   interpret: {"input", "method", "instance_index"?, "config"?}
//   attack:    {"input", "method", "instance_index"?, "config"?}
// Classification answers with one object. Tagging answers with an array
// holding one entry per predicted entity, unless instance_index picks one.

nlohmann::ordered_json PredictPayload(const Model& model,
                                      const nlohmann::json& request,
                                      const Limits& limits = {});
nlohmann::ordered_json InterpretPayload(const Model& model,
                                        const nlohmann::json& request,
                                        const MethodDefaults& defaults,
                                        const Limits& limits = {});
nlohmann::ordered_json AttackPayload(const Model& model,
                                     const nlohmann::json& request,
                                     const MethodDefaults& defaults,
                                     const Limits& limits = {});

struct Response {
  int status = 200;
  std::string body;
};

/// HTTP status for an exception thrown by the payload builders, and the
/// JSON error body to send. Unexpected exceptions become a generic 500.
Response ErrorResponse(const std::exception& error);

/// Transport-independent request handling: routes, parses, checks limits,
/// and renders errors. Holds no mutable state.
class Service {
 public:
  Service(std::shared_ptr<const ModelRegistry> registry, MethodDefaults defaults,
          Limits limits)
      : registry_(std::move(registry)),
        defaults_(std::move(defaults)),
        limits_(limits) {}

  Response Handle(std::string_view method, std::string_view path,
                  std::string_view body) const;

  const ModelRegistry& registry() const { return *registry_; }

 private:
  std::shared_ptr<const ModelRegistry> registry_;
  MethodDefaults defaults_;
  Limits limits_;
};

}  // namespace interp::service

#endif  // INTERP_SERVICE_API_H_

// src/service/config.cc

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

#include "interp/service/config.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "interp/errors.h"

namespace interp::service {
namespace {

using json = nlohmann::json;

std::pair<std::string, int> ParseBind(const std::string& value) {
  const auto colon = value.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == value.size()) {
    throw ConfigError("bind address must look like host:port, got \"" + value + "\"");
  }
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(value.substr(colon + 1), &used);
    if (used != value.size() - colon - 1) throw std::invalid_argument("port");
  } catch (const std::exception&) {
    throw ConfigError("bad port in bind address \"" + value + "\"");
  }
  return {value.substr(0, colon), port};
}

template <typename T>
T Field(const json& object, const char* key, T fallback) {
  if (!object.contains(key)) return fallback;
  try {
    return object[key].get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field \"") + key + "\" has the wrong type");
  }
}

}  // namespace

ServiceConfig ParseServiceConfig(const std::string& text,
                                 const std::filesystem::path& base_dir,
                                 const std::optional<std::string>& bind_override) {
  json root;
  try {
    root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");

  ServiceConfig config;
  if (root.contains("bind")) {
    const json& bind = root["bind"];
    config.host = Field<std::string>(bind, "host", config.host);
    config.port = Field<int>(bind, "port", config.port);
  }
  config.cors_origin = Field<std::string>(root, "cors_origin", config.cors_origin);
  if (root.contains("limits")) {
    const json& limits = root["limits"];
    config.limits.max_request_bytes =
        Field<std::size_t>(limits, "max_request_bytes", config.limits.max_request_bytes);
    config.limits.max_tokens =
        Field<std::size_t>(limits, "max_tokens", config.limits.max_tokens);
  }
  if (root.contains("defaults")) {
    if (!root["defaults"].is_object()) throw ConfigError("\"defaults\" must be an object");
    for (const auto& [method, cfg] : root["defaults"].items()) {
      if (!config.defaults.configs.contains(method) && method != "vanilla") {
        throw ConfigError("defaults for unknown method \"" + method + "\"");
      }
      for (const auto& [key, value] : cfg.items()) {
        config.defaults.configs[method][key] = value;
      }
    }
  }
  if (root.contains("models")) {
    if (!root["models"].is_array()) throw ConfigError("\"models\" must be an array");
    for (const json& entry : root["models"]) {
      const auto name = Field<std::string>(entry, "name", "");
      const auto checkpoint = Field<std::string>(entry, "checkpoint", "");
      if (name.empty() || checkpoint.empty()) {
        throw ConfigError("every model entry needs \"name\" and \"checkpoint\"");
      }
      std::filesystem::path path(checkpoint);
      if (path.is_relative()) path = base_dir / path;
      config.models.emplace_back(name, path);
    }
  }
  if (bind_override && !bind_override->empty()) {
    std::tie(config.host, config.port) = ParseBind(*bind_override);
  }
  return config;
}

ServiceConfig LoadServiceConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  std::optional<std::string> bind;
  if (const char* env = std::getenv(kBindEnvVar)) bind = env;
  return ParseServiceConfig(text.str(), path.parent_path(), bind);
}

std::shared_ptr<ModelRegistry> BuildRegistry(const ServiceConfig& config) {
  auto registry = std::make_shared<ModelRegistry>();
  for (const auto& [name, path] : config.models) registry->Add(name, path);
  return registry;
}

}  // namespace interp::service

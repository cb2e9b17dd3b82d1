// interp/service/config.h

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

#ifndef INTERP_SERVICE_CONFIG_H_
#define INTERP_SERVICE_CONFIG_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "interp/service/api.h"

namespace interp::service {

/// Environment variable that overrides the bind address, "host:port".
inline constexpr char kBindEnvVar[] = "INTERP_BIND";

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string cors_origin = "*";
  Limits limits;
  MethodDefaults defaults = MethodDefaults::BuiltIn();
  /// (name, checkpoint path) in file order.
  std::vector<std::pair<std::string, std::filesystem::path>> models;
};

/// Parses the JSON config text (// and /* */ comments allowed). Relative
/// checkpoint paths resolve against `base_dir`. `bind_override` has the
/// kBindEnvVar format. Throws ConfigError.
ServiceConfig ParseServiceConfig(const std::string& text,
                                 const std::filesystem::path& base_dir,
                                 const std::optional<std::string>& bind_override);

/// Reads the file and applies the environment override.
ServiceConfig LoadServiceConfig(const std::filesystem::path& path);

/// Loads every listed checkpoint; ConfigError names the first failure.
std::shared_ptr<ModelRegistry> BuildRegistry(const ServiceConfig& config);

}  // namespace interp::service

#endif  // INTERP_SERVICE_CONFIG_H_

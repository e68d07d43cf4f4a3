// Copyright 2026 The STT Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STT_CONFIG_H_
#define STT_CONFIG_H_

#include <cstddef>
#include <optional>
#include <string>

#include "json.hpp"
#include "stt/dataset_forge.h"
#include "stt/reward_engine.h"

namespace stt {

inline constexpr char kToolkitVersion[] = "0.1.0";

// Environment variable naming a configuration file, consulted when no
// --config flag is given.
inline constexpr char kConfigEnvVar[] = "STT_CONFIG";

struct ServiceSettings {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t batch_cap = 256;

  friend bool operator==(const ServiceSettings&, const ServiceSettings&) = default;
};

// Effective settings for every subsystem. The file form is a JSON object with
// optional sections "reward", "motion", "densify" and "service"; omitted keys
// keep their defaults and unknown keys are rejected.
struct ToolkitConfig {
  RewardConfig reward;
  DensifyConfig densify;
  ServiceSettings service;
};

// Throws SchemaError naming the offending key, std::invalid_argument when the
// resulting values break an invariant.
ToolkitConfig ConfigFromJson(const nlohmann::json& json);
ToolkitConfig LoadConfigFile(const std::string& path);

// The --config path if given, else $STT_CONFIG, else built-in defaults.
ToolkitConfig ResolveConfig(const std::optional<std::string>& flag_path);

nlohmann::json RewardConfigToJson(const RewardConfig& config);

// Applies a partial reward configuration: any of temporal_sigma_floor,
// temporal_sigma_fraction, spatial_gate and a nested "motion" object.
void ApplyRewardOverrides(const nlohmann::json& overrides, const std::string& path,
                          RewardConfig* config);
void ApplyMotionOverrides(const nlohmann::json& overrides, const std::string& path,
                          MotionConfig* config);

// Hex SHA-256 of the canonical JSON form of `config`.
std::string ConfigDigest(const RewardConfig& config);

}  // namespace stt

#endif  // STT_CONFIG_H_

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

#include "stt/config.h"

#include <openssl/sha.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string_view>

#include "stt/records.h"

namespace stt {
namespace {

using nlohmann::json;

std::string Join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

void RequireObject(const json& value, const std::string& path) {
  if (!value.is_object()) throw SchemaError(path, "expected an object");
}

double Number(const json& value, const std::string& path) {
  if (!value.is_number()) throw SchemaError(path, "expected a number");
  return value.get<double>();
}

void RejectUnknown(const json& object, const std::string& path,
                   std::initializer_list<std::string_view> known) {
  for (const auto& [key, unused] : object.items()) {
    bool found = false;
    for (std::string_view k : known) found = found || key == k;
    if (!found) throw SchemaError(Join(path, key), "unknown key");
  }
}

}  // namespace

void ApplyMotionOverrides(const json& overrides, const std::string& path,
                          MotionConfig* config) {
  RequireObject(overrides, path);
  RejectUnknown(overrides, path,
                {"stationary_speed_threshold", "slow_moderate_threshold",
                 "moderate_fast_threshold", "scale_stable_log_threshold"});
  auto set = [&](std::string_view key, double* field) {
    if (const auto it = overrides.find(key); it != overrides.end()) {
      *field = Number(*it, Join(path, key));
    }
  };
  set("stationary_speed_threshold", &config->stationary_speed_threshold);
  set("slow_moderate_threshold", &config->slow_moderate_threshold);
  set("moderate_fast_threshold", &config->moderate_fast_threshold);
  set("scale_stable_log_threshold", &config->scale_stable_log_threshold);
}

void ApplyRewardOverrides(const json& overrides, const std::string& path,
                          RewardConfig* config) {
  RequireObject(overrides, path);
  RejectUnknown(overrides, path,
                {"temporal_sigma_floor", "temporal_sigma_fraction",
                 "spatial_gate", "motion"});
  auto set = [&](std::string_view key, double* field) {
    if (const auto it = overrides.find(key); it != overrides.end()) {
      *field = Number(*it, Join(path, key));
    }
  };
  set("temporal_sigma_floor", &config->temporal_sigma_floor);
  set("temporal_sigma_fraction", &config->temporal_sigma_fraction);
  set("spatial_gate", &config->spatial_gate);
  if (const auto it = overrides.find("motion"); it != overrides.end()) {
    ApplyMotionOverrides(*it, Join(path, "motion"), &config->motion);
  }
}

ToolkitConfig ConfigFromJson(const json& value) {
  RequireObject(value, "");
  RejectUnknown(value, "", {"reward", "motion", "densify", "service"});
  ToolkitConfig config;
  if (const auto it = value.find("reward"); it != value.end()) {
    RequireObject(*it, "reward");
    RejectUnknown(*it, "reward",
                  {"temporal_sigma_floor", "temporal_sigma_fraction",
                   "spatial_gate"});
    ApplyRewardOverrides(*it, "reward", &config.reward);
  }
  if (const auto it = value.find("motion"); it != value.end()) {
    ApplyMotionOverrides(*it, "motion", &config.reward.motion);
  }
  if (const auto it = value.find("densify"); it != value.end()) {
    RequireObject(*it, "densify");
    RejectUnknown(*it, "densify", {"stride", "interpolator"});
    if (const auto s = it->find("stride"); s != it->end()) {
      config.densify.stride = Number(*s, "densify.stride");
    }
    if (const auto s = it->find("interpolator"); s != it->end()) {
      if (!s->is_string() || s->get<std::string>() != "linear") {
        throw SchemaError("densify.interpolator", "only \"linear\" is available");
      }
    }
  }
  if (const auto it = value.find("service"); it != value.end()) {
    RequireObject(*it, "service");
    RejectUnknown(*it, "service", {"host", "port", "batch_cap"});
    if (const auto s = it->find("host"); s != it->end()) {
      if (!s->is_string()) throw SchemaError("service.host", "expected a string");
      config.service.host = s->get<std::string>();
    }
    if (const auto s = it->find("port"); s != it->end()) {
      if (!s->is_number_integer() || s->get<int>() < 0 || s->get<int>() > 65535) {
        throw SchemaError("service.port", "expected a port number");
      }
      config.service.port = s->get<int>();
    }
    if (const auto s = it->find("batch_cap"); s != it->end()) {
      if (!s->is_number_unsigned() || s->get<std::size_t>() == 0) {
        throw SchemaError("service.batch_cap", "expected a positive integer");
      }
      config.service.batch_cap = s->get<std::size_t>();
    }
  }
  CheckRewardConfig(config.reward);
  CheckDensifyConfig(config.densify);
  return config;
}

ToolkitConfig LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  json value;
  try {
    value = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("config is not valid JSON: ") + e.what());
  }
  return ConfigFromJson(value);
}

ToolkitConfig ResolveConfig(const std::optional<std::string>& flag_path) {
  if (flag_path) return LoadConfigFile(*flag_path);
  if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env) {
    return LoadConfigFile(env);
  }
  return {};
}

json RewardConfigToJson(const RewardConfig& c) {
  return json{
      {"temporal_sigma_floor", c.temporal_sigma_floor},
      {"temporal_sigma_fraction", c.temporal_sigma_fraction},
      {"spatial_gate", c.spatial_gate},
      {"motion",
       {{"stationary_speed_threshold", c.motion.stationary_speed_threshold},
        {"slow_moderate_threshold", c.motion.slow_moderate_threshold},
        {"moderate_fast_threshold", c.motion.moderate_fast_threshold},
        {"scale_stable_log_threshold", c.motion.scale_stable_log_threshold}}}};
}

std::string ConfigDigest(const RewardConfig& config) {
  const std::string canonical = RewardConfigToJson(config).dump();
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(canonical.data()),
         canonical.size(), digest);
  std::string hex;
  hex.reserve(2 * SHA256_DIGEST_LENGTH);
  for (unsigned char byte : digest) {
    char buf[3];
    std::snprintf(buf, sizeof(buf), "%02x", byte);
    hex.append(buf);
  }
  return hex;
}

}  // namespace stt

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

#ifndef STT_WIRE_H_
#define STT_WIRE_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "stt/reward_engine.h"
#include "stt/track_geometry.h"

namespace stt {

// JSON shapes shared by the CLI and the HTTP service.

struct ScoreRequest {
  std::string prediction;
  GroundTruthRecord record;
  std::optional<std::string> masked_prediction;
  RewardConfig config;
};

// `defaults` is the effective configuration before request overrides.
// Throws SchemaError with a path rooted at `path`.
ScoreRequest ScoreRequestFromJson(const nlohmann::json& json,
                                  const RewardConfig& defaults,
                                  const std::string& path);

nlohmann::json ScoreRequestToJson(const std::string& prediction,
                                  const GroundTruthRecord& record,
                                  const std::optional<std::string>& masked);

nlohmann::json BreakdownToJson(const RewardBreakdown& breakdown);
RewardBreakdown BreakdownFromJson(const nlohmann::json& json);
nlohmann::json FormatReportToJson(const FormatReport& report);
nlohmann::json ScoreResultToJson(const ScoreResult& result);

struct DescriptorRequest {
  std::string object_name;
  std::vector<TimedBox> samples;
  MotionConfig config;
};

DescriptorRequest DescriptorRequestFromJson(const nlohmann::json& json,
                                            const MotionConfig& defaults);

// Serialization used for every response line and body. Invalid UTF-8 is
// replaced rather than rejected.
std::string DumpJson(const nlohmann::json& json);

}  // namespace stt

#endif  // STT_WIRE_H_

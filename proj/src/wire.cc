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

#include "stt/wire.h"

#include <cmath>

#include "stt/config.h"
#include "stt/records.h"

namespace stt {
namespace {

using nlohmann::json;

std::string Join(const std::string& path, const char* key) {
  return path.empty() ? std::string(key) : path + "." + key;
}

}  // namespace

ScoreRequest ScoreRequestFromJson(const json& value, const RewardConfig& defaults,
                                  const std::string& path) {
  if (!value.is_object()) throw SchemaError(path, "expected an object");
  ScoreRequest request;
  const auto prediction = value.find("prediction");
  if (prediction == value.end()) {
    throw SchemaError(Join(path, "prediction"), "missing required field");
  }
  if (!prediction->is_string()) {
    throw SchemaError(Join(path, "prediction"), "expected a string");
  }
  request.prediction = prediction->get<std::string>();

  const auto record = value.find("record");
  if (record == value.end()) {
    throw SchemaError(Join(path, "record"), "missing required field");
  }
  request.record = RecordFromJson(*record, Join(path, "record"));

  if (const auto masked = value.find("masked_prediction");
      masked != value.end() && !masked->is_null()) {
    if (!masked->is_string()) {
      throw SchemaError(Join(path, "masked_prediction"), "expected a string");
    }
    request.masked_prediction = masked->get<std::string>();
  }

  request.config = defaults;
  if (const auto overrides = value.find("config_overrides");
      overrides != value.end() && !overrides->is_null()) {
    const std::string at = Join(path, "config_overrides");
    ApplyRewardOverrides(*overrides, at, &request.config);
    try {
      CheckRewardConfig(request.config);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(at, e.what());
    }
  }
  return request;
}

json ScoreRequestToJson(const std::string& prediction,
                        const GroundTruthRecord& record,
                        const std::optional<std::string>& masked) {
  json out{{"prediction", prediction}, {"record", RecordToJson(record)}};
  if (masked) out["masked_prediction"] = *masked;
  return out;
}

json BreakdownToJson(const RewardBreakdown& b) {
  return json{{"r_fmt", b.r_fmt},       {"r_acc", b.r_acc},
              {"r_t", b.r_t},           {"r_s", b.r_s},
              {"r_traj", b.r_traj},     {"r_ground", b.r_ground},
              {"r_motion", b.r_motion()}, {"r_thk", b.r_thk()},
              {"total", b.total()}};
}

RewardBreakdown BreakdownFromJson(const json& value) {
  RewardBreakdown b;
  b.r_fmt = value.at("r_fmt").get<double>();
  b.r_acc = value.at("r_acc").get<double>();
  b.r_t = value.at("r_t").get<double>();
  b.r_s = value.at("r_s").get<double>();
  b.r_traj = value.at("r_traj").get<double>();
  b.r_ground = value.at("r_ground").get<double>();
  return b;
}

json FormatReportToJson(const FormatReport& report) {
  json violations = json::array();
  for (const Violation& v : report.violations) {
    violations.push_back({{"rule_id", v.rule_id},
                          {"begin", v.location.begin},
                          {"end", v.location.end},
                          {"message", v.message}});
  }
  return json{{"valid", report.valid}, {"violations", std::move(violations)}};
}

json ScoreResultToJson(const ScoreResult& result) {
  json per_object = json::object();
  for (const auto& [name, scores] : result.per_object) {
    per_object[name] = {
        {"traj", scores.traj ? json(*scores.traj) : json(nullptr)},
        {"ground", scores.ground ? json(*scores.ground) : json(nullptr)}};
  }
  return json{{"breakdown", BreakdownToJson(result.breakdown)},
              {"diagnostics", FormatReportToJson(result.diagnostics)},
              {"per_object", std::move(per_object)}};
}

DescriptorRequest DescriptorRequestFromJson(const json& value,
                                            const MotionConfig& defaults) {
  if (!value.is_object()) throw SchemaError("", "expected an object");
  DescriptorRequest request;
  request.config = defaults;
  if (const auto name = value.find("object_name");
      name != value.end() && !name->is_null()) {
    if (!name->is_string()) throw SchemaError("object_name", "expected a string");
    request.object_name = name->get<std::string>();
  }
  const auto samples = value.find("samples");
  if (samples == value.end()) throw SchemaError("samples", "missing required field");
  if (!samples->is_array()) throw SchemaError("samples", "expected an array");
  for (std::size_t i = 0; i < samples->size(); ++i) {
    const std::string at = "samples[" + std::to_string(i) + "]";
    const json& sample = (*samples)[i];
    if (!sample.is_object()) throw SchemaError(at, "expected an object");
    const auto t = sample.find("t");
    if (t == sample.end() || !t->is_number() ||
        !std::isfinite(t->get<double>())) {
      throw SchemaError(at + ".t", "expected a finite number");
    }
    const auto box = sample.find("box");
    if (box == sample.end()) throw SchemaError(at + ".box", "missing required field");
    request.samples.push_back({t->get<double>(), BoxFromJson(*box, at + ".box")});
  }
  if (const auto config = value.find("config");
      config != value.end() && !config->is_null()) {
    ApplyMotionOverrides(*config, "config", &request.config);
    try {
      CheckMotionConfig(request.config);
    } catch (const std::invalid_argument& e) {
      throw SchemaError("config", e.what());
    }
  }
  return request;
}

std::string DumpJson(const json& value) {
  return value.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace stt

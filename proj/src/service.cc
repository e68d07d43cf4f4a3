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

#include "stt/service.h"

#include <utility>

#include "httplib.h"
#include "stt/records.h"
#include "stt/wire.h"

namespace stt {
namespace {

using nlohmann::json;

HttpReply Error(int status, std::string_view kind, const std::string& path,
                const std::string& message) {
  json body{{"error", kind}, {"message", message}};
  if (!path.empty() || kind == "schema") body["path"] = path;
  return {status, DumpJson(body)};
}

std::optional<json> ParseBody(std::string_view body, HttpReply* failure) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    *failure = Error(400, "schema", "", std::string("body is not JSON: ") + e.what());
    return std::nullopt;
  }
}

}  // namespace

ScoringService::ScoringService(ToolkitConfig config)
    : config_(std::move(config)), digest_(ConfigDigest(config_.reward)) {}

ScoringService::~ScoringService() = default;

HttpReply ScoringService::HandleScore(std::string_view body) const {
  HttpReply failure;
  const auto value = ParseBody(body, &failure);
  if (!value) return failure;

  // Validate everything before scoring anything.
  std::vector<ScoreRequest> requests;
  try {
    if (value->is_array()) {
      if (value->size() > config_.service.batch_cap) {
        return Error(413, "batch_too_large", "",
                     "batch of " + std::to_string(value->size()) +
                         " exceeds the cap of " +
                         std::to_string(config_.service.batch_cap));
      }
      requests.reserve(value->size());
      for (std::size_t i = 0; i < value->size(); ++i) {
        requests.push_back(ScoreRequestFromJson(
            (*value)[i], config_.reward, "[" + std::to_string(i) + "]"));
      }
    } else {
      requests.push_back(ScoreRequestFromJson(*value, config_.reward, ""));
    }
  } catch (const SchemaError& e) {
    return Error(400, "schema", e.path(), e.detail());
  }

  json out = json::array();
  for (const ScoreRequest& request : requests) {
    std::optional<std::string_view> masked;
    if (request.masked_prediction) masked = *request.masked_prediction;
    out.push_back(ScoreResultToJson(
        Score(request.prediction, request.record, masked, request.config)));
  }
  return {200, DumpJson(value->is_array() ? out : out[0])};
}

HttpReply ScoringService::HandleDescriptor(std::string_view body) const {
  HttpReply failure;
  const auto value = ParseBody(body, &failure);
  if (!value) return failure;
  try {
    DescriptorRequest request =
        DescriptorRequestFromJson(*value, config_.reward.motion);
    const Track track(request.object_name, std::move(request.samples));
    const MotionDescriptor d = ComputeMotionDescriptor(track, request.config);
    json out = DescriptorToJson(d);
    out["normalized_speed"] = NormalizedSpeed(track);
    out["scale_log_ratio"] = ScaleLogRatio(track);
    return {200, DumpJson(out)};
  } catch (const SchemaError& e) {
    return Error(400, "schema", e.path(), e.detail());
  } catch (const GeometryError& e) {
    return Error(400, GeometryError::KindName(e.kind()), "", e.what());
  }
}

HttpReply ScoringService::HandleHealth() const {
  return {200, DumpJson(json{{"status", "ok"},
                             {"version", kToolkitVersion},
                             {"config_digest", digest_}})};
}

int ScoringService::Bind(const std::string& host, int port) {
  server_ = std::make_unique<httplib::Server>();
  auto reply = [](httplib::Response& res, const HttpReply& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server_->Post("/v1/score", [this, reply](const httplib::Request& req,
                                           httplib::Response& res) {
    reply(res, HandleScore(req.body));
  });
  server_->Post("/v1/descriptor", [this, reply](const httplib::Request& req,
                                                httplib::Response& res) {
    reply(res, HandleDescriptor(req.body));
  });
  server_->Get("/healthz", [this, reply](const httplib::Request&,
                                         httplib::Response& res) {
    reply(res, HandleHealth());
  });
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool ScoringService::Serve() {
  return server_ != nullptr && server_->listen_after_bind();
}

void ScoringService::Stop() {
  if (server_ != nullptr) server_->stop();
}

}  // namespace stt

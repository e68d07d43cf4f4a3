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

// Command-line front end: batch scoring, augmentation, format validation,
// single-track descriptors and the HTTP verifier.

#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stt/config.h"
#include "stt/dataset_forge.h"
#include "stt/records.h"
#include "stt/reward_engine.h"
#include "stt/service.h"
#include "stt/wire.h"

namespace {

using nlohmann::json;

struct CommonFlags {
  std::optional<std::string> config_path;
  std::optional<double> sigma_floor;
  std::optional<double> sigma_fraction;
  std::optional<double> gate;
  std::optional<double> stride;
  std::optional<double> stationary;
  std::optional<double> slow_moderate;
  std::optional<double> moderate_fast;
  std::optional<double> scale;
  bool permissive = false;
};

void AddConfigFlag(CLI::App* app, CommonFlags* f) {
  app->add_option("--config", f->config_path,
                  std::string("JSON configuration file (default: $") +
                      stt::kConfigEnvVar + ")");
}

void AddRewardFlags(CLI::App* app, CommonFlags* f) {
  app->add_option("--sigma-floor", f->sigma_floor,
                  "temporal proximity floor, seconds");
  app->add_option("--sigma-fraction", f->sigma_fraction,
                  "temporal proximity as a fraction of video duration");
  app->add_option("--gate", f->gate, "spatial IoU gate, seconds");
}

void AddMotionFlags(CLI::App* app, CommonFlags* f) {
  app->add_option("--stationary-threshold", f->stationary,
                  "stationary/slow cutoff, diagonals per second");
  app->add_option("--slow-threshold", f->slow_moderate,
                  "slow/moderate cutoff, diagonals per second");
  app->add_option("--fast-threshold", f->moderate_fast,
                  "moderate/fast cutoff, diagonals per second");
  app->add_option("--scale-threshold", f->scale,
                  "stable scale cutoff, absolute log area ratio");
}

stt::ToolkitConfig Effective(const CommonFlags& f) {
  stt::ToolkitConfig config = stt::ResolveConfig(f.config_path);
  auto take = [](const std::optional<double>& flag, double* field) {
    if (flag) *field = *flag;
  };
  take(f.sigma_floor, &config.reward.temporal_sigma_floor);
  take(f.sigma_fraction, &config.reward.temporal_sigma_fraction);
  take(f.gate, &config.reward.spatial_gate);
  take(f.stride, &config.densify.stride);
  take(f.stationary, &config.reward.motion.stationary_speed_threshold);
  take(f.slow_moderate, &config.reward.motion.slow_moderate_threshold);
  take(f.moderate_fast, &config.reward.motion.moderate_fast_threshold);
  take(f.scale, &config.reward.motion.scale_stable_log_threshold);
  stt::CheckRewardConfig(config.reward);
  stt::CheckDensifyConfig(config.densify);
  return config;
}

// Opens `path` for reading, "-" meaning standard input.
std::istream& OpenInput(const std::string& path, std::ifstream* file) {
  if (path == "-") return std::cin;
  file->open(path);
  if (!*file) throw stt::IoError("cannot open " + path);
  return *file;
}

std::ostream& OpenOutput(const std::string& path, std::ofstream* file) {
  if (path == "-") return std::cout;
  file->open(path);
  if (!*file) throw stt::IoError("cannot open " + path + " for writing");
  return *file;
}

std::string JoinValue(const json& value) {
  return value.is_string() ? value.get<std::string>() : value.dump();
}

int RunScore(const std::string& predictions_path, const std::string& records_path,
             const std::string& output_path, const std::string& join_key,
             const CommonFlags& flags) {
  const stt::ToolkitConfig config = Effective(flags);

  std::map<std::string, stt::GroundTruthRecord> truth;
  {
    std::ifstream file;
    std::istream& in = OpenInput(records_path, &file);
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        const json value = json::parse(line);
        if (!value.is_object() || !value.contains(join_key)) {
          throw stt::SchemaError(join_key, "missing join key");
        }
        truth.emplace(JoinValue(value[join_key]), stt::RecordFromJson(value));
      } catch (const json::parse_error& e) {
        const stt::SchemaError error("", std::string("invalid JSON: ") + e.what(), n);
        if (!flags.permissive) throw error;
        std::cerr << "warning: " << records_path << ": " << error.what() << "\n";
      } catch (const stt::SchemaError& e) {
        const stt::SchemaError error(e.path(), e.detail(), n);
        if (!flags.permissive) throw error;
        std::cerr << "warning: " << records_path << ": " << error.what() << "\n";
      }
    }
  }

  std::ifstream pred_file;
  std::istream& in = OpenInput(predictions_path, &pred_file);
  std::vector<std::string> lines;
  stt::RewardBreakdown sum;
  std::size_t scored = 0;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json out = json::object();
    std::string problem;
    std::optional<json> value;
    try {
      value = json::parse(line);
    } catch (const json::parse_error& e) {
      problem = std::string("invalid JSON: ") + e.what();
    }
    const stt::GroundTruthRecord* record = nullptr;
    if (problem.empty()) {
      if (!value->is_object() || !value->contains(join_key)) {
        problem = "missing join key '" + join_key + "'";
      } else if (!(*value)["prediction"].is_string()) {
        problem = "missing string field 'prediction'";
      } else {
        const std::string key = JoinValue((*value)[join_key]);
        out[join_key] = (*value)[join_key];
        const auto it = truth.find(key);
        if (it == truth.end()) {
          problem = "no ground truth for " + join_key + "=" + key;
        } else {
          record = &it->second;
        }
      }
    }
    if (!problem.empty()) {
      if (!flags.permissive) {
        std::cerr << "error: " << predictions_path << ": line " << n << ": "
                  << problem << "\n";
        return 1;
      }
      std::cerr << "warning: " << predictions_path << ": line " << n << ": "
                << problem << ", scored as zero\n";
      out["error"] = problem;
      out["breakdown"] = stt::BreakdownToJson({});
      lines.push_back(stt::DumpJson(out));
      ++scored;
      continue;
    }

    std::optional<std::string> masked;
    if (const auto it = value->find("masked_prediction");
        it != value->end() && it->is_string()) {
      masked = it->get<std::string>();
    }
    const stt::ScoreResult result = stt::Score(
        (*value)["prediction"].get<std::string>(), *record,
        masked ? std::optional<std::string_view>(*masked) : std::nullopt,
        config.reward);
    json scored_json = stt::ScoreResultToJson(result);
    for (auto& [key, field] : scored_json.items()) out[key] = std::move(field);
    lines.push_back(stt::DumpJson(out));
    const stt::RewardBreakdown& b = result.breakdown;
    sum.r_fmt += b.r_fmt;
    sum.r_acc += b.r_acc;
    sum.r_t += b.r_t;
    sum.r_s += b.r_s;
    sum.r_traj += b.r_traj;
    sum.r_ground += b.r_ground;
    ++scored;
  }

  std::ofstream out_file;
  std::ostream& out = OpenOutput(output_path, &out_file);
  for (const std::string& l : lines) out << l << '\n';
  out.flush();
  if (!out) throw stt::IoError("write failure on " + output_path);

  const double count = scored == 0 ? 1.0 : static_cast<double>(scored);
  std::ostringstream summary;
  summary << "scored " << scored << " predictions; means:"
          << " r_fmt=" << sum.r_fmt / count << " r_acc=" << sum.r_acc / count
          << " r_t=" << sum.r_t / count << " r_s=" << sum.r_s / count
          << " r_traj=" << sum.r_traj / count
          << " r_ground=" << sum.r_ground / count
          << " total=" << sum.total() / count;
  std::cerr << summary.str() << "\n";
  return 0;
}

int RunAugment(const std::string& input_path, const std::string& output_path,
               const CommonFlags& flags) {
  const stt::ToolkitConfig config = Effective(flags);
  std::ifstream in_file;
  std::istream& in = OpenInput(input_path, &in_file);
  std::ofstream out_file;
  std::ostream& out = OpenOutput(output_path, &out_file);
  stt::RecordReader reader(in, flags.permissive);
  std::size_t reported = 0;
  std::size_t written = 0;
  while (auto record = reader.Next()) {
    std::vector<std::string> notes;
    const stt::AnnotationRecord augmented = stt::AugmentRecord(
        *record, config.densify, config.reward.motion, &notes);
    for (const std::string& note : notes) {
      std::cerr << "note: " << record->video_id << ": " << note << "\n";
    }
    out << stt::DumpJson(stt::RecordToJson(augmented)) << '\n';
    ++written;
    for (; reported < reader.skipped().size(); ++reported) {
      std::cerr << "warning: skipped " << reader.skipped()[reported].message
                << "\n";
    }
  }
  for (; reported < reader.skipped().size(); ++reported) {
    std::cerr << "warning: skipped " << reader.skipped()[reported].message << "\n";
  }
  out.flush();
  if (!out) throw stt::IoError("write failure on " + output_path);
  std::cerr << "augmented " << written << " records\n";
  return 0;
}

int RunValidate(const std::string& input_path) {
  std::ifstream file;
  std::istream& in = OpenInput(input_path, &file);
  bool all_valid = true;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    // A JSON string, an object with "prediction", or the raw trace itself.
    std::string trace = line;
    try {
      const json value = json::parse(line);
      if (value.is_string()) {
        trace = value.get<std::string>();
      } else if (value.is_object() && value.contains("prediction") &&
                 value["prediction"].is_string()) {
        trace = value["prediction"].get<std::string>();
      }
    } catch (const json::parse_error&) {
    }
    const stt::FormatReport report = stt::ValidateFormat(trace);
    all_valid = all_valid && report.valid;
    json out = stt::FormatReportToJson(report);
    out["line"] = n;
    std::cout << stt::DumpJson(out) << '\n';
  }
  return all_valid ? 0 : 1;
}

int RunDescriptor(const std::string& input_path, const CommonFlags& flags) {
  const stt::ToolkitConfig config = Effective(flags);
  std::ifstream file;
  std::istream& in = OpenInput(input_path, &file);
  std::stringstream body;
  body << in.rdbuf();
  stt::ScoringService service(config);
  const stt::HttpReply reply = service.HandleDescriptor(body.str());
  (reply.status == 200 ? std::cout : std::cerr) << reply.body << '\n';
  return reply.status == 200 ? 0 : 1;
}

stt::ScoringService* g_service = nullptr;

void HandleSignal(int) {
  if (g_service != nullptr) g_service->Stop();
}

int RunServe(const CommonFlags& flags, std::optional<int> port,
             std::optional<std::string> host, std::optional<std::size_t> cap) {
  stt::ToolkitConfig config = Effective(flags);
  if (port) config.service.port = *port;
  if (host) config.service.host = *host;
  if (cap) config.service.batch_cap = *cap;
  stt::ScoringService service(config);
  const int bound = service.Bind(config.service.host, config.service.port);
  if (bound < 0) {
    std::cerr << "error: cannot bind " << config.service.host << ":"
              << config.service.port << "\n";
    return 2;
  }
  g_service = &service;
  std::signal(SIGINT, HandleSignal);
  std::signal(SIGTERM, HandleSignal);
  std::cerr << "listening on " << config.service.host << ":" << bound
            << " (config " << service.config_digest().substr(0, 12) << ")\n";
  std::cerr.flush();
  const bool ok = service.Serve();
  g_service = nullptr;
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory-grounded reasoning toolkit: trace validation, "
               "motion descriptors, rewards and dataset augmentation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", stt::kToolkitVersion);
  CommonFlags flags;

  auto* score = app.add_subcommand("score", "score predictions against ground truth");
  std::string predictions, records, output = "-", join_key = "video_id";
  score->add_option("predictions", predictions,
                    "JSONL with a join key, prediction and optional masked_prediction")
      ->required();
  score->add_option("records", records, "JSONL ground-truth records")->required();
  score->add_option("output", output, "output JSONL path, - for stdout");
  score->add_option("--join-key", join_key, "field joining predictions to records");
  score->add_flag("--permissive", flags.permissive,
                  "score unmatched or malformed lines as zero instead of failing");
  AddConfigFlag(score, &flags);
  AddRewardFlags(score, &flags);
  AddMotionFlags(score, &flags);

  auto* augment = app.add_subcommand("augment", "densify tracks, add descriptors and motion tags");
  std::string aug_in, aug_out = "-";
  augment->add_option("input", aug_in, "JSONL records")->required();
  augment->add_option("output", aug_out, "output JSONL path, - for stdout");
  augment->add_option("--stride", flags.stride, "densification stride, seconds");
  augment->add_flag("--permissive", flags.permissive, "skip malformed lines");
  AddConfigFlag(augment, &flags);
  AddMotionFlags(augment, &flags);

  auto* validate = app.add_subcommand("validate", "lint traces, one report per line");
  std::string val_in;
  validate->add_option("input", val_in, "traces: JSON strings, {prediction} objects or raw lines")
      ->required();

  auto* descriptor = app.add_subcommand("descriptor", "motion descriptor of one track");
  std::string desc_in = "-";
  descriptor->add_option("input", desc_in, "JSON {samples:[{t, box}]}, - for stdin");
  AddConfigFlag(descriptor, &flags);
  AddMotionFlags(descriptor, &flags);

  auto* serve = app.add_subcommand("serve", "run the HTTP reward verifier");
  std::optional<int> port;
  std::optional<std::string> host;
  std::optional<std::size_t> cap;
  serve->add_option("--port", port, "listen port (0 picks a free one)");
  serve->add_option("--host", host, "listen address");
  serve->add_option("--batch-cap", cap, "largest accepted batch");
  AddConfigFlag(serve, &flags);
  AddRewardFlags(serve, &flags);
  AddMotionFlags(serve, &flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*score) return RunScore(predictions, records, output, join_key, flags);
    if (*augment) return RunAugment(aug_in, aug_out, flags);
    if (*validate) return RunValidate(val_in);
    if (*descriptor) return RunDescriptor(desc_in, flags);
    if (*serve) return RunServe(flags, port, host, cap);
  } catch (const stt::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

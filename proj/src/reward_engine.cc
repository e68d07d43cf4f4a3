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

#include "stt/reward_engine.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include "stt/rouge.h"

namespace stt {
namespace {

double OrdinalCredit(int predicted, int truth) {
  const int gap = std::abs(predicted - truth);
  if (gap == 0) return kExactMatchCredit;
  if (gap == 1) return kAdjacentMatchCredit;
  return kMismatchCredit;
}

// Index of the predicted sample closest in time to `t`; earlier wins ties.
std::size_t Nearest(const std::vector<TimedBox>& samples, double t) {
  const auto it = std::lower_bound(
      samples.begin(), samples.end(), t,
      [](const TimedBox& s, double value) { return s.timestamp < value; });
  if (it == samples.begin()) return 0;
  if (it == samples.end()) return samples.size() - 1;
  const std::size_t hi = static_cast<std::size_t>(it - samples.begin());
  const std::size_t lo = hi - 1;
  return (t - samples[lo].timestamp) <= (samples[hi].timestamp - t) ? lo : hi;
}

const std::vector<TimedBox>* FindTrack(const TrackMap& tracks,
                                       const std::string& name) {
  const auto it = tracks.find(NormalizeObjectName(name));
  return it == tracks.end() || it->second.empty() ? nullptr : &it->second;
}

std::string AnswerTail(std::string_view source) {
  const std::size_t open = source.rfind("<answer>");
  if (open == std::string_view::npos) return {};
  const std::size_t begin = open + 8;
  const std::size_t close = source.find("</answer>", begin);
  return std::string(source.substr(
      begin, close == std::string_view::npos ? std::string_view::npos
                                             : close - begin));
}

}  // namespace

void CheckRewardConfig(const RewardConfig& c) {
  if (!(c.temporal_sigma_floor > 0.0 && std::isfinite(c.temporal_sigma_floor))) {
    throw std::invalid_argument("temporal_sigma_floor must be positive");
  }
  if (!(c.temporal_sigma_fraction > 0.0 &&
        std::isfinite(c.temporal_sigma_fraction))) {
    throw std::invalid_argument("temporal_sigma_fraction must be positive");
  }
  if (!(c.spatial_gate > 0.0 && std::isfinite(c.spatial_gate))) {
    throw std::invalid_argument("spatial_gate must be positive");
  }
  CheckMotionConfig(c.motion);
}

double BinMatchScore(Direction predicted, Direction truth) {
  if (predicted == truth) return kExactMatchCredit;
  if (predicted == Direction::kStat || truth == Direction::kStat) {
    return kMismatchCredit;
  }
  const int gap = (CompassIndex(predicted) - CompassIndex(truth) + 8) % 8;
  return (gap == 1 || gap == 7) ? kAdjacentMatchCredit : kMismatchCredit;
}

double BinMatchScore(Speed predicted, Speed truth) {
  return OrdinalCredit(static_cast<int>(predicted), static_cast<int>(truth));
}

double BinMatchScore(Scale predicted, Scale truth) {
  return OrdinalCredit(static_cast<int>(predicted), static_cast<int>(truth));
}

double BinMatchScore(std::string_view predicted, std::string_view truth,
                     BinKind kind) {
  auto require = [&](auto parsed, std::string_view text) {
    if (!parsed) {
      throw VocabularyMismatch("'" + std::string(text) +
                               "' is not a bin of the requested kind");
    }
    return *parsed;
  };
  switch (kind) {
    case BinKind::kDirection:
      return BinMatchScore(require(ParseDirection(predicted), predicted),
                           require(ParseDirection(truth), truth));
    case BinKind::kSpeed:
      return BinMatchScore(require(ParseSpeed(predicted), predicted),
                           require(ParseSpeed(truth), truth));
    case BinKind::kScale:
      return BinMatchScore(require(ParseScale(predicted), predicted),
                           require(ParseScale(truth), truth));
  }
  return kMismatchCredit;
}

double TrajectoryPairScore(const MotionDescriptor& predicted,
                           const MotionDescriptor& truth) {
  return kTrajectoryDirectionWeight *
             BinMatchScore(predicted.direction, truth.direction) +
         kTrajectorySpeedWeight * BinMatchScore(predicted.speed, truth.speed) +
         kTrajectoryScaleWeight * BinMatchScore(predicted.scale, truth.scale);
}

double GroundingPairScore(const MotionDescriptor& original,
                          const MotionDescriptor& masked) {
  return kGroundingDirectionWeight * (original.direction != masked.direction) +
         kGroundingSpeedWeight * (original.speed != masked.speed) +
         kGroundingScaleWeight * (original.scale != masked.scale);
}

double RewardFormat(std::string_view source) {
  return ValidateFormat(source).valid ? 1.0 : 0.0;
}

std::string NormalizeChoice(std::string_view answer) {
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)); };
  while (!answer.empty() && is_space(answer.front())) answer.remove_prefix(1);
  while (!answer.empty() && is_space(answer.back())) answer.remove_suffix(1);
  std::string_view body = answer;
  if (!body.empty() && body.front() == '(') body.remove_prefix(1);
  if (!body.empty() && std::isalpha(static_cast<unsigned char>(body.front())) &&
      (body.size() == 1 ||
       !std::isalnum(static_cast<unsigned char>(body[1])))) {
    return std::string(
        1, static_cast<char>(std::toupper(static_cast<unsigned char>(body[0]))));
  }
  std::string out;
  bool pending_space = false;
  for (char c : answer) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  while (!out.empty() && (out.back() == '.' || out.back() == ')')) out.pop_back();
  return out;
}

double RewardAccuracy(std::string_view predicted_answer,
                      const GroundTruthRecord& record) {
  if (record.answer_kind == AnswerKind::kMcq) {
    const std::string predicted = NormalizeChoice(predicted_answer);
    return !predicted.empty() && predicted == NormalizeChoice(record.gt_answer)
               ? 1.0
               : 0.0;
  }
  return RougeLF1(predicted_answer, record.gt_answer);
}

double RewardTemporal(const TrackMap& predicted, const GroundTruthRecord& record,
                      const RewardConfig& config) {
  const double sigma = std::max(config.temporal_sigma_floor,
                                config.temporal_sigma_fraction * record.duration);
  double sum = 0.0;
  std::size_t count = 0;
  for (const ObjectAnnotation& object : record.objects) {
    const auto* track = FindTrack(predicted, object.name);
    for (const TimedBox& kf : object.keyframes) {
      ++count;
      if (track == nullptr) continue;
      const double gap =
          std::abs(kf.timestamp - (*track)[Nearest(*track, kf.timestamp)].timestamp);
      sum += std::max(0.0, 1.0 - gap / sigma);
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double RewardSpatial(const TrackMap& predicted, const GroundTruthRecord& record,
                     const RewardConfig& config) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const ObjectAnnotation& object : record.objects) {
    const auto* track = FindTrack(predicted, object.name);
    for (const TimedBox& kf : object.keyframes) {
      ++count;
      if (track == nullptr) continue;
      const TimedBox& near = (*track)[Nearest(*track, kf.timestamp)];
      if (std::abs(near.timestamp - kf.timestamp) <= config.spatial_gate) {
        sum += Iou(near.box, kf.box);
      }
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

std::map<std::string, std::vector<MotionDescriptor>> GroundTruthDescriptors(
    const GroundTruthRecord& record, const MotionConfig& config) {
  // Merge keyframes of objects whose names normalize identically.
  std::map<std::string, std::map<double, Box>> merged;
  for (const ObjectAnnotation& object : record.objects) {
    auto& samples = merged[NormalizeObjectName(object.name)];
    for (const TimedBox& kf : object.keyframes) samples[kf.timestamp] = kf.box;
  }
  std::map<std::string, std::vector<MotionDescriptor>> supplied;
  if (record.descriptors) {
    for (const auto& [name, list] : *record.descriptors) {
      auto& out = supplied[NormalizeObjectName(name)];
      out.insert(out.end(), list.begin(), list.end());
    }
  }

  std::map<std::string, std::vector<MotionDescriptor>> truth;
  for (const auto& [name, samples] : merged) {
    if (samples.size() < 2) continue;
    if (const auto it = supplied.find(name); it != supplied.end()) {
      if (!it->second.empty()) truth[name] = it->second;
      continue;
    }
    std::vector<TimedBox> keyframes;
    keyframes.reserve(samples.size());
    for (const auto& [t, box] : samples) keyframes.push_back({t, box});
    try {
      truth[name] = {ComputeMotionDescriptor(Track(name, std::move(keyframes)),
                                             config)};
    } catch (const GeometryError&) {
      // Closed loops have no direction; such objects are not scored.
    }
  }
  return truth;
}

double RewardTrajectory(const MotionTagMap& predicted,
                        const GroundTruthRecord& record,
                        const RewardConfig& config,
                        std::map<std::string, double>* per_object) {
  const auto truth = GroundTruthDescriptors(record, config.motion);
  if (truth.empty()) return 0.0;
  static const std::vector<MotionTag> kNoTags;
  double sum = 0.0;
  for (const auto& [name, descriptors] : truth) {
    const auto it = predicted.find(name);
    const auto& tags = it == predicted.end() ? kNoTags : it->second;
    const std::size_t paired = std::min(tags.size(), descriptors.size());
    double object_sum = 0.0;
    for (std::size_t i = 0; i < paired; ++i) {
      object_sum += TrajectoryPairScore(tags[i].descriptor(), descriptors[i]);
    }
    const double score =
        object_sum /
        static_cast<double>(std::max(tags.size(), descriptors.size()));
    if (per_object != nullptr) (*per_object)[name] = score;
    sum += score;
  }
  return sum / static_cast<double>(truth.size());
}

double RewardGrounding(const MotionTagMap& original, const MotionTagMap& masked,
                       std::map<std::string, double>* per_object) {
  double sum = 0.0;
  std::size_t objects = 0;
  for (const auto& [name, tags] : original) {
    if (tags.empty()) continue;
    const auto it = masked.find(name);
    double object_sum = 0.0;
    for (std::size_t i = 0; i < tags.size(); ++i) {
      if (it == masked.end() || i >= it->second.size()) {
        object_sum += 1.0;  // no counterpart: fully grounded
      } else {
        object_sum +=
            GroundingPairScore(tags[i].descriptor(), it->second[i].descriptor());
      }
    }
    const double score = object_sum / static_cast<double>(tags.size());
    if (per_object != nullptr) (*per_object)[name] = score;
    sum += score;
    ++objects;
  }
  return objects == 0 ? 0.0 : sum / static_cast<double>(objects);
}

ScoreResult Score(std::string_view prediction, const GroundTruthRecord& record,
                  std::optional<std::string_view> masked_prediction,
                  const RewardConfig& config) {
  ScoreResult result;
  result.diagnostics = ValidateFormat(prediction);
  RewardBreakdown& b = result.breakdown;
  b.r_fmt = result.diagnostics.valid ? 1.0 : 0.0;

  Trace trace;
  try {
    trace = ParseTrace(prediction);
  } catch (const ParseError&) {
    b.r_acc = RewardAccuracy(AnswerTail(prediction), record);
    return result;
  }

  b.r_acc = RewardAccuracy(trace.answer, record);
  const TrackMap tracks = ExtractTracks(trace);
  b.r_t = RewardTemporal(tracks, record, config);
  b.r_s = RewardSpatial(tracks, record, config);

  const MotionTagMap tags = ExtractMotionTags(trace);
  std::map<std::string, double> traj_objects;
  b.r_traj = RewardTrajectory(tags, record, config, &traj_objects);
  for (const auto& [name, score] : traj_objects) {
    result.per_object[name].traj = score;
  }

  if (masked_prediction) {
    try {
      const MotionTagMap masked_tags =
          ExtractMotionTags(ParseTrace(*masked_prediction));
      std::map<std::string, double> ground_objects;
      b.r_ground = RewardGrounding(tags, masked_tags, &ground_objects);
      for (const auto& [name, score] : ground_objects) {
        result.per_object[name].ground = score;
      }
    } catch (const ParseError&) {
      b.r_ground = 0.0;
    }
  }
  return result;
}

}  // namespace stt

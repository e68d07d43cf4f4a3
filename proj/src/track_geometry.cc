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

#include "stt/track_geometry.h"

#include <numbers>
#include <utility>

namespace stt {
namespace {

void RequireTwo(const Track& track) {
  if (track.size() < 2) {
    throw GeometryError(GeometryError::Kind::kTrackTooShort,
                        "track needs at least two samples, got " +
                            std::to_string(track.size()));
  }
}

}  // namespace

void CheckMotionConfig(const MotionConfig& c) {
  if (!(c.stationary_speed_threshold > 0.0 &&
        c.stationary_speed_threshold < c.slow_moderate_threshold &&
        c.slow_moderate_threshold < c.moderate_fast_threshold &&
        std::isfinite(c.moderate_fast_threshold))) {
    throw std::invalid_argument(
        "speed thresholds must satisfy 0 < stationary < slow_moderate < "
        "moderate_fast");
  }
  if (!(c.scale_stable_log_threshold > 0.0 &&
        std::isfinite(c.scale_stable_log_threshold))) {
    throw std::invalid_argument("scale_stable_log_threshold must be positive");
  }
}

GeometryError::GeometryError(Kind kind, const std::string& message)
    : std::runtime_error(std::string(KindName(kind)) + ": " + message),
      kind_(kind) {}

std::string_view GeometryError::KindName(Kind kind) {
  switch (kind) {
    case Kind::kInvalidTrack: return "InvalidTrack";
    case Kind::kTrackTooShort: return "TrackTooShort";
    case Kind::kZeroDuration: return "ZeroDuration";
    case Kind::kZeroVector: return "ZeroVector";
  }
  return "Unknown";
}

Track::Track(std::string object_name, std::vector<TimedBox> samples)
    : object_name_(std::move(object_name)), samples_(std::move(samples)) {
  if (samples_.empty()) {
    throw GeometryError(GeometryError::Kind::kInvalidTrack,
                        "track has no samples");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i].timestamp)) {
      throw GeometryError(GeometryError::Kind::kInvalidTrack,
                          "non-finite timestamp at sample " + std::to_string(i));
    }
    if (!IsValidBox(samples_[i].box)) {
      throw GeometryError(GeometryError::Kind::kInvalidTrack,
                          "invalid box at sample " + std::to_string(i));
    }
    if (i > 0 && !(samples_[i].timestamp > samples_[i - 1].timestamp)) {
      throw GeometryError(GeometryError::Kind::kInvalidTrack,
                          "timestamps must be strictly increasing (sample " +
                              std::to_string(i) + ")");
    }
  }
}

Vec2 Centroid(const Box& box) {
  return {(box.x1 + box.x2) / 2.0, (box.y1 + box.y2) / 2.0};
}

double BoxArea(const Box& box) { return (box.x2 - box.x1) * (box.y2 - box.y1); }

double BoxDiagonal(const Box& box) {
  return std::hypot(box.x2 - box.x1, box.y2 - box.y1);
}

Vec2 NetDisplacement(const Track& track) {
  RequireTwo(track);
  // Each step weighs in with its own magnitude, so the sum telescopes.
  const Vec2 first = Centroid(track.samples().front().box);
  const Vec2 last = Centroid(track.samples().back().box);
  return {last.x - first.x, last.y - first.y};
}

Direction QuantizeDirection(Vec2 displacement, bool is_stationary) {
  if (is_stationary) return Direction::kStat;
  if (displacement.x == 0.0 && displacement.y == 0.0) {
    throw GeometryError(GeometryError::Kind::kZeroVector,
                        "cannot assign a compass bin to a zero displacement");
  }
  const double degrees =
      std::atan2(-displacement.y, displacement.x) * 180.0 / std::numbers::pi;
  const int sector = static_cast<int>(std::floor((degrees + 22.5) / 45.0));
  return static_cast<Direction>(((sector % 8) + 8) % 8);
}

double NormalizedSpeed(const Track& track) {
  RequireTwo(track);
  const auto samples = track.samples();
  const double duration = samples.back().timestamp - samples.front().timestamp;
  if (!(duration > 0.0)) {
    throw GeometryError(GeometryError::Kind::kZeroDuration,
                        "track spans zero seconds");
  }
  double path = 0.0;
  double diagonal_sum = BoxDiagonal(samples.front().box);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const Vec2 a = Centroid(samples[i - 1].box);
    const Vec2 b = Centroid(samples[i].box);
    path += std::hypot(b.x - a.x, b.y - a.y);
    diagonal_sum += BoxDiagonal(samples[i].box);
  }
  const double mean_diagonal = diagonal_sum / static_cast<double>(samples.size());
  return path / duration / mean_diagonal;
}

Speed BinSpeed(double speed, const MotionConfig& config) {
  if (speed < config.stationary_speed_threshold) return Speed::kStationary;
  if (speed < config.slow_moderate_threshold) return Speed::kSlow;
  if (speed < config.moderate_fast_threshold) return Speed::kModerate;
  return Speed::kFast;
}

double ScaleLogRatio(const Track& track) {
  RequireTwo(track);
  return std::log(BoxArea(track.samples().back().box) /
                  BoxArea(track.samples().front().box));
}

Scale BinScale(double log_ratio, const MotionConfig& config) {
  if (std::abs(log_ratio) <= config.scale_stable_log_threshold) {
    return Scale::kStable;
  }
  return log_ratio > 0.0 ? Scale::kApproaching : Scale::kReceding;
}

MotionDescriptor ComputeMotionDescriptor(const Track& track,
                                         const MotionConfig& config) {
  RequireTwo(track);
  MotionDescriptor out;
  out.speed = BinSpeed(NormalizedSpeed(track), config);
  out.direction = QuantizeDirection(NetDisplacement(track),
                                    out.speed == Speed::kStationary);
  out.scale = BinScale(ScaleLogRatio(track), config);
  return out;
}

}  // namespace stt

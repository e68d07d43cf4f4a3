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

#ifndef STT_TRACK_GEOMETRY_H_
#define STT_TRACK_GEOMETRY_H_

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stt/box.h"
#include "stt/trace_grammar.h"
#include "stt/vocabulary.h"

namespace stt {

// Bin cutoffs for motion discretization. Speeds are in box diagonals per
// second, the scale cutoff is an absolute log area ratio in nats.
struct MotionConfig {
  double stationary_speed_threshold = 0.05;
  double slow_moderate_threshold = 0.5;
  double moderate_fast_threshold = 1.5;
  double scale_stable_log_threshold = std::log(1.2);

  friend bool operator==(const MotionConfig&, const MotionConfig&) = default;
};

// Throws std::invalid_argument unless
// 0 < stationary < slow_moderate < moderate_fast and the scale cutoff > 0.
void CheckMotionConfig(const MotionConfig& config);

class GeometryError : public std::runtime_error {
 public:
  enum class Kind { kInvalidTrack, kTrackTooShort, kZeroDuration, kZeroVector };

  GeometryError(Kind kind, const std::string& message);

  Kind kind() const { return kind_; }

  // "InvalidTrack", "TrackTooShort", "ZeroDuration" or "ZeroVector".
  static std::string_view KindName(Kind kind);

 private:
  Kind kind_;
};

// Time-ordered boxes of one object. Construction enforces at least one
// sample, strictly increasing finite timestamps and valid boxes.
class Track {
 public:
  Track(std::string object_name, std::vector<TimedBox> samples);

  const std::string& object_name() const { return object_name_; }
  std::span<const TimedBox> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }

 private:
  std::string object_name_;
  std::vector<TimedBox> samples_;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

Vec2 Centroid(const Box& box);
double BoxArea(const Box& box);
double BoxDiagonal(const Box& box);

// Sum of per-step centroid displacements, c_N - c_1.
Vec2 NetDisplacement(const Track& track);

// Compass bin of a displacement in image coordinates (y down, so north is
// decreasing y). Bins are centered on multiples of 45 degrees and cover
// [center - 22.5, center + 22.5). Throws ZeroVector for a moving (0, 0).
Direction QuantizeDirection(Vec2 displacement, bool is_stationary);

// Centroid path length per second, in units of the mean box diagonal.
double NormalizedSpeed(const Track& track);

// Half-open bins; a value on a cutoff belongs to the faster bin.
Speed BinSpeed(double speed, const MotionConfig& config);

// ln(last area / first area).
double ScaleLogRatio(const Track& track);

// |r| <= cutoff is stable; growth is approaching, shrinkage receding.
Scale BinScale(double log_ratio, const MotionConfig& config);

// Direction, speed and scale bins of a track with at least two samples.
// A stationary speed bin forces STAT; otherwise the direction of the net
// displacement is used, which throws ZeroVector for closed loops.
MotionDescriptor ComputeMotionDescriptor(const Track& track,
                                         const MotionConfig& config = {});

}  // namespace stt

#endif  // STT_TRACK_GEOMETRY_H_

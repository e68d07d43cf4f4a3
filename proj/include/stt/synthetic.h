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

#ifndef STT_SYNTHETIC_H_
#define STT_SYNTHETIC_H_

#include <cstdint>
#include <stdexcept>

#include "stt/track_geometry.h"
#include "stt/vocabulary.h"

namespace stt {

enum class MotionKind { kLinear, kStationary, kApproach, kRecede, kArc };

struct SyntheticSpec {
  MotionKind motion_kind = MotionKind::kLinear;
  Direction target_direction = Direction::kE;
  Speed target_speed = Speed::kModerate;
  Scale target_scale = Scale::kStable;
  int sample_count = 5;
  double margin = 0.1;  // relative distance kept from every bin cutoff
  std::uint64_t seed = 0;
};

class InfeasibleSpec : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SyntheticTrack {
  Track track;
  MotionDescriptor descriptor;
};

// Oracle measurements of a track.
struct OracleReading {
  MotionDescriptor descriptor;
  double speed = 0.0;      // diagonals per second
  double log_ratio = 0.0;  // ln(last area / first area)
};

// Straight-line classifier kept apart from track_geometry: the direction of
// c_N - c_1 is located against a table of sector boundary vectors, speed and
// area ratio are compared directly against the cutoffs.
OracleReading OracleClassify(const Track& track, const MotionConfig& config);

// True when speed and log ratio keep a relative distance of at least
// `margin` from every cutoff (the stationary case has speed exactly 0).
bool ClearOfThresholds(const OracleReading& reading, const MotionConfig& config,
                       double margin);

// Deterministic (per seed) track whose oracle classification equals the
// targets with every measurement `margin` away from the cutoffs.
//
// linear and arc move the centroid and accept any scale target; approach and
// recede fix the scale target and accept any speed, including STAT;
// stationary requires (STAT, stationary, stable) and yields a constant box.
// Throws InfeasibleSpec when the targets disagree with each other or with the
// motion kind, or when the margin leaves a bin empty.
SyntheticTrack GenerateSynthetic(const SyntheticSpec& spec,
                                 const MotionConfig& config = {});

}  // namespace stt

#endif  // STT_SYNTHETIC_H_

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

#ifndef STT_VOCABULARY_H_
#define STT_VOCABULARY_H_

#include <array>
#include <optional>
#include <string_view>

namespace stt {

// Compass bins in counterclockwise order starting from east, followed by the
// stationary state. The numeric value of a moving bin is its index on the
// 8-cycle (E=0, NE=1, ..., SE=7).
enum class Direction { kE, kNE, kN, kNW, kW, kSW, kS, kSE, kStat };

// Ordinal speed bins, slowest first.
enum class Speed { kStationary, kSlow, kModerate, kFast };

// Ordinal scale-change bins. Area growth (approaching) ranks lowest.
enum class Scale { kApproaching, kStable, kReceding };

inline constexpr std::array<Direction, 9> kAllDirections = {
    Direction::kN,  Direction::kNE, Direction::kE,  Direction::kSE,
    Direction::kS,  Direction::kSW, Direction::kW,  Direction::kNW,
    Direction::kStat};
inline constexpr std::array<Speed, 4> kAllSpeeds = {
    Speed::kStationary, Speed::kSlow, Speed::kModerate, Speed::kFast};
inline constexpr std::array<Scale, 3> kAllScales = {
    Scale::kApproaching, Scale::kStable, Scale::kReceding};

std::string_view ToString(Direction d);
std::string_view ToString(Speed s);
std::string_view ToString(Scale c);

// Exact, case-sensitive lookups against the closed vocabularies.
std::optional<Direction> ParseDirection(std::string_view text);
std::optional<Speed> ParseSpeed(std::string_view text);
std::optional<Scale> ParseScale(std::string_view text);

// Index on the compass cycle, or -1 for STAT.
int CompassIndex(Direction d);

// Direction rotated by `steps` compass points counterclockwise. STAT is fixed.
Direction RotateDirection(Direction d, int steps);

// E<->W, N<->S, NE<->SW, NW<->SE. STAT is fixed.
Direction Antipode(Direction d);

struct MotionDescriptor {
  Direction direction = Direction::kStat;
  Speed speed = Speed::kStationary;
  Scale scale = Scale::kStable;

  friend bool operator==(const MotionDescriptor&,
                         const MotionDescriptor&) = default;
};

// direction == STAT exactly when speed == stationary.
inline bool IsStatCoupled(Direction d, Speed s) {
  return (d == Direction::kStat) == (s == Speed::kStationary);
}

}  // namespace stt

#endif  // STT_VOCABULARY_H_

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

#include "stt/vocabulary.h"

namespace stt {
namespace {

constexpr std::array<std::string_view, 9> kDirectionNames = {
    "E", "NE", "N", "NW", "W", "SW", "S", "SE", "STAT"};
constexpr std::array<std::string_view, 4> kSpeedNames = {
    "stationary", "slow", "moderate", "fast"};
constexpr std::array<std::string_view, 3> kScaleNames = {
    "approaching", "stable", "receding"};

template <typename Enum, std::size_t N>
std::optional<Enum> Lookup(const std::array<std::string_view, N>& names,
                           std::string_view text) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == text) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

}  // namespace

std::string_view ToString(Direction d) {
  return kDirectionNames[static_cast<int>(d)];
}
std::string_view ToString(Speed s) { return kSpeedNames[static_cast<int>(s)]; }
std::string_view ToString(Scale c) { return kScaleNames[static_cast<int>(c)]; }

std::optional<Direction> ParseDirection(std::string_view text) {
  return Lookup<Direction>(kDirectionNames, text);
}
std::optional<Speed> ParseSpeed(std::string_view text) {
  return Lookup<Speed>(kSpeedNames, text);
}
std::optional<Scale> ParseScale(std::string_view text) {
  return Lookup<Scale>(kScaleNames, text);
}

int CompassIndex(Direction d) {
  return d == Direction::kStat ? -1 : static_cast<int>(d);
}

Direction RotateDirection(Direction d, int steps) {
  if (d == Direction::kStat) return d;
  int index = (CompassIndex(d) + steps) % 8;
  if (index < 0) index += 8;
  return static_cast<Direction>(index);
}

Direction Antipode(Direction d) { return RotateDirection(d, 4); }

}  // namespace stt

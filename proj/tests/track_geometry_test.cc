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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "stt/synthetic.h"
#include "test_support.h"

namespace stt {
namespace {

Track CentroidTrack(const std::vector<std::pair<double, double>>& centroids,
                    double side, double dt) {
  std::vector<TimedBox> samples;
  double t = 0.0;
  for (const auto& [cx, cy] : centroids) {
    samples.push_back(
        {t, {cx - side / 2, cy - side / 2, cx + side / 2, cy + side / 2}});
    t += dt;
  }
  return Track("object", std::move(samples));
}

Track AreaTrack(double first_area, double last_area) {
  const double a = std::sqrt(first_area);
  const double b = std::sqrt(last_area);
  return Track("object", {{0.0, {0.0, 0.0, a, a}}, {1.0, {0.0, 0.0, b, b}}});
}

GeometryError::Kind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const GeometryError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no GeometryError";
  return GeometryError::Kind::kInvalidTrack;
}

TEST(Centroid, Examples) {
  EXPECT_EQ(Centroid({0, 0, 1, 1}), (Vec2{0.5, 0.5}));
  const Vec2 c = Centroid({0.1, 0.2, 0.3, 0.6});
  EXPECT_NEAR(c.x, 0.2, 1e-12);
  EXPECT_NEAR(c.y, 0.4, 1e-12);
  EXPECT_EQ(Centroid({0.4, 0.4, 0.6, 0.6}), (Vec2{0.5, 0.5}));
}

TEST(BoxMeasures, Examples) {
  EXPECT_EQ(BoxArea({0, 0, 1, 1}), 1.0);
  EXPECT_NEAR(BoxDiagonal({0, 0, 1, 1}), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(BoxArea({0, 0, 0.3, 0.4}), 0.12, 1e-15);
  EXPECT_NEAR(BoxDiagonal({0, 0, 0.3, 0.4}), 0.5, 1e-15);
  EXPECT_EQ(BoxArea({0.25, 0.25, 0.75, 0.75}), 0.25);
}

TEST(NetDisplacement, Examples) {
  Vec2 d = NetDisplacement(CentroidTrack({{0.2, 0.5}, {0.6, 0.5}}, 0.1, 1.0));
  EXPECT_NEAR(d.x, 0.4, 1e-12);
  EXPECT_NEAR(d.y, 0.0, 1e-12);
  d = NetDisplacement(CentroidTrack({{0.2, 0.5}, {0.9, 0.5}, {0.6, 0.5}}, 0.1, 1.0));
  EXPECT_NEAR(d.x, 0.4, 1e-12);
  EXPECT_NEAR(d.y, 0.0, 1e-12);
  d = NetDisplacement(CentroidTrack({{0.3, 0.3}, {0.3, 0.3}, {0.3, 0.3}}, 0.2, 1.0));
  EXPECT_EQ(d, (Vec2{0.0, 0.0}));
}

TEST(QuantizeDirection, Examples) {
  EXPECT_EQ(QuantizeDirection({0.4, 0.0}, false), Direction::kE);
  EXPECT_EQ(QuantizeDirection({-0.1, 0.0}, false), Direction::kW);
  EXPECT_EQ(QuantizeDirection({0.0, -0.2}, false), Direction::kN);
  EXPECT_EQ(QuantizeDirection({0.0, 0.2}, false), Direction::kS);
  EXPECT_EQ(QuantizeDirection({0.1, -0.1}, false), Direction::kNE);
  EXPECT_EQ(QuantizeDirection({-0.1, 0.1}, false), Direction::kSW);
  EXPECT_EQ(QuantizeDirection({0.4, 0.0}, true), Direction::kStat);
}

TEST(QuantizeDirection, ZeroVectorIsAnError) {
  EXPECT_EQ(KindOf([] { QuantizeDirection({0.0, 0.0}, false); }),
            GeometryError::Kind::kZeroVector);
  EXPECT_EQ(QuantizeDirection({0.0, 0.0}, true), Direction::kStat);
}

TEST(QuantizeDirection, EveryCompassPoint) {
  for (int k = 0; k < 8; ++k) {
    const double rad = k * std::numbers::pi / 4.0;
    const Vec2 v{std::cos(rad), -std::sin(rad)};
    EXPECT_EQ(QuantizeDirection(v, false), static_cast<Direction>(k)) << k;
  }
}

TEST(NormalizedSpeed, Examples) {
  EXPECT_EQ(NormalizedSpeed(CentroidTrack({{0.3, 0.3}, {0.3, 0.3}}, 0.2, 1.0)), 0.0);
  // Side 0.4 / sqrt(2) gives diagonal 0.4.
  const double side04 = 0.4 / std::sqrt(2.0);
  EXPECT_NEAR(NormalizedSpeed(CentroidTrack({{0.3, 0.5}, {0.7, 0.5}}, side04, 2.0)),
              0.5, 1e-12);
  // Width 0.2 and height sqrt(0.21) give diagonal 0.5; the centroid moves
  // 0.2 -> 0.9 -> 0.6, a path of 1.0 over 2 s.
  const double h = std::sqrt(0.21);
  const Track back_and_forth("a", {{0.0, {0.1, 0.25, 0.3, 0.25 + h}},
                                   {1.0, {0.8, 0.25, 1.0, 0.25 + h}},
                                   {2.0, {0.5, 0.25, 0.7, 0.25 + h}}});
  EXPECT_NEAR(NormalizedSpeed(back_and_forth), 1.0, 1e-12);
}

TEST(BinSpeed, Examples) {
  const MotionConfig cfg;
  EXPECT_EQ(BinSpeed(0.0, cfg), Speed::kStationary);
  EXPECT_EQ(BinSpeed(0.5, cfg), Speed::kModerate);
  EXPECT_EQ(BinSpeed(2.0, cfg), Speed::kFast);
  EXPECT_EQ(BinSpeed(0.05, cfg), Speed::kSlow);
  EXPECT_EQ(BinSpeed(0.0499, cfg), Speed::kStationary);
  EXPECT_EQ(BinSpeed(1.5, cfg), Speed::kFast);
  EXPECT_EQ(BinSpeed(1.4999, cfg), Speed::kModerate);
}

TEST(ScaleLogRatio, Examples) {
  EXPECT_NEAR(ScaleLogRatio(AreaTrack(0.12, 0.12)), 0.0, 1e-12);
  EXPECT_NEAR(ScaleLogRatio(AreaTrack(0.1, 0.2)), std::log(2.0), 1e-12);
  EXPECT_NEAR(ScaleLogRatio(AreaTrack(0.2, 0.1)), -std::log(2.0), 1e-12);
}

TEST(BinScale, Examples) {
  const MotionConfig cfg;
  EXPECT_EQ(BinScale(0.0, cfg), Scale::kStable);
  EXPECT_EQ(BinScale(std::log(2.0), cfg), Scale::kApproaching);
  EXPECT_EQ(BinScale(-std::log(2.0), cfg), Scale::kReceding);
  EXPECT_EQ(BinScale(std::log(1.2), cfg), Scale::kStable);
  EXPECT_EQ(BinScale(-std::log(1.2), cfg), Scale::kStable);
}

TEST(MotionDescriptor, Examples) {
  EXPECT_EQ(ComputeMotionDescriptor(CentroidTrack({{0.5, 0.5}, {0.5, 0.5}}, 0.2, 1.0)),
            (MotionDescriptor{Direction::kStat, Speed::kStationary, Scale::kStable}));
  // Leftward 0.1 units over 2 s with diagonal ~0.28: ~0.18 diag/s.
  EXPECT_EQ(ComputeMotionDescriptor(
                CentroidTrack({{0.6, 0.5}, {0.55, 0.5}, {0.5, 0.5}}, 0.2, 1.0)),
            (MotionDescriptor{Direction::kW, Speed::kSlow, Scale::kStable}));
  const Track approach("car", {{0.0, {0.1, 0.4, 0.2, 0.5}},
                               {0.5, {0.5, 0.4, 0.6414, 0.5414}}});
  EXPECT_EQ(ComputeMotionDescriptor(approach),
            (MotionDescriptor{Direction::kE, Speed::kFast, Scale::kApproaching}));
}

TEST(MotionDescriptor, ClosedLoopHasNoDirection) {
  // Moving fast but returning to the start leaves no net displacement to bin.
  const Track loop = CentroidTrack({{0.3, 0.5}, {0.7, 0.5}, {0.3, 0.5}}, 0.2, 1.0);
  EXPECT_GT(NormalizedSpeed(loop), 0.5);
  EXPECT_EQ(KindOf([&] { ComputeMotionDescriptor(loop); }),
            GeometryError::Kind::kZeroVector);
}

TEST(Track, RejectsBadInput) {
  EXPECT_EQ(KindOf([] { Track("a", {}); }), GeometryError::Kind::kInvalidTrack);
  EXPECT_EQ(KindOf([] {
              Track("a", {{1.0, {0, 0, 1, 1}}, {1.0, {0, 0, 1, 1}}});
            }),
            GeometryError::Kind::kInvalidTrack);
  EXPECT_EQ(KindOf([] {
              Track("a", {{1.0, {0, 0, 1, 1}}, {0.5, {0, 0, 1, 1}}});
            }),
            GeometryError::Kind::kInvalidTrack);
  EXPECT_EQ(KindOf([] { Track("a", {{0.0, {0.5, 0, 0.5, 1}}}); }),
            GeometryError::Kind::kInvalidTrack);
  EXPECT_EQ(KindOf([] {
              Track("a", {{std::numeric_limits<double>::quiet_NaN(), {0, 0, 1, 1}}});
            }),
            GeometryError::Kind::kInvalidTrack);
}

TEST(Track, SingleSampleIsTooShort) {
  const Track one("a", {{0.0, {0.1, 0.1, 0.2, 0.2}}});
  EXPECT_EQ(KindOf([&] { NetDisplacement(one); }), GeometryError::Kind::kTrackTooShort);
  EXPECT_EQ(KindOf([&] { NormalizedSpeed(one); }), GeometryError::Kind::kTrackTooShort);
  EXPECT_EQ(KindOf([&] { ComputeMotionDescriptor(one); }),
            GeometryError::Kind::kTrackTooShort);
}

TEST(MotionConfig, Validation) {
  EXPECT_NO_THROW(CheckMotionConfig({}));
  MotionConfig bad;
  bad.slow_moderate_threshold = 0.01;
  EXPECT_THROW(CheckMotionConfig(bad), std::invalid_argument);
  bad = {};
  bad.scale_stable_log_threshold = -0.1;
  EXPECT_THROW(CheckMotionConfig(bad), std::invalid_argument);
}

// Runs `check` on random straight tracks that sit clear of every cutoff.
template <typename Check>
int ForClearTracks(std::uint64_t seed, int wanted, Check check) {
  testing::Rng rng(seed);
  const MotionConfig cfg;
  int checked = 0;
  for (int attempt = 0; attempt < 20 * wanted && checked < wanted; ++attempt) {
    const int sector = testing::UniformInt(rng, 0, 7);
    const Track track = testing::RandomStraightTrack(rng, sector);
    if (!ClearOfThresholds(OracleClassify(track, cfg), cfg, 0.01)) continue;
    check(rng, track, sector);
    ++checked;
  }
  return checked;
}

TEST(GeometryProperties, CompassEquivariance) {
  const int n = ForClearTracks(1, 200, [](testing::Rng&, const Track& track, int sector) {
    const MotionDescriptor base = ComputeMotionDescriptor(track);
    ASSERT_EQ(base.direction, static_cast<Direction>(sector));
    for (int steps = 0; steps < 8; ++steps) {
      const MotionDescriptor rotated =
          ComputeMotionDescriptor(testing::RotateTrack(track, steps));
      EXPECT_EQ(rotated.direction, RotateDirection(base.direction, steps));
      EXPECT_EQ(rotated.speed, base.speed);
      EXPECT_EQ(rotated.scale, base.scale);
    }
  });
  EXPECT_EQ(n, 200);
}

TEST(GeometryProperties, TranslationInvariance) {
  const int n = ForClearTracks(2, 200, [](testing::Rng& rng, const Track& track, int) {
    const Track moved = testing::TranslateTrack(
        track, testing::Uniform(rng, -0.08, 0.08), testing::Uniform(rng, -0.08, 0.08));
    EXPECT_EQ(ComputeMotionDescriptor(moved), ComputeMotionDescriptor(track));
  });
  EXPECT_EQ(n, 200);
}

TEST(GeometryProperties, UniformScalingKeepsSpeedAndScale) {
  const int n = ForClearTracks(3, 200, [](testing::Rng& rng, const Track& track, int) {
    const Track scaled = testing::ScaleTrack(track, testing::Uniform(rng, 0.3, 1.1));
    const MotionDescriptor a = ComputeMotionDescriptor(track);
    const MotionDescriptor b = ComputeMotionDescriptor(scaled);
    EXPECT_EQ(a.speed, b.speed);
    EXPECT_EQ(a.scale, b.scale);
    EXPECT_NEAR(NormalizedSpeed(track), NormalizedSpeed(scaled), 1e-9);
  });
  EXPECT_EQ(n, 200);
}

TEST(GeometryProperties, TimeReversal) {
  const int n = ForClearTracks(4, 200, [](testing::Rng&, const Track& track, int) {
    const Track reversed = testing::ReverseTrack(track);
    const MotionDescriptor a = ComputeMotionDescriptor(track);
    const MotionDescriptor b = ComputeMotionDescriptor(reversed);
    EXPECT_EQ(b.direction, Antipode(a.direction));
    EXPECT_EQ(b.speed, a.speed);
    EXPECT_NEAR(ScaleLogRatio(reversed), -ScaleLogRatio(track), 1e-12);
    EXPECT_EQ(static_cast<int>(b.scale), 2 - static_cast<int>(a.scale));
  });
  EXPECT_EQ(n, 200);
}

TEST(GeometryProperties, StatCoupling) {
  testing::Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const Track track = i % 4 == 0 ? CentroidTrack({{0.4, 0.4}, {0.4, 0.4}}, 0.1, 1.0)
                                   : testing::RandomTrack(rng);
    MotionDescriptor d;
    try {
      d = ComputeMotionDescriptor(track);
    } catch (const GeometryError& e) {
      EXPECT_EQ(e.kind(), GeometryError::Kind::kZeroVector);
      continue;
    }
    EXPECT_TRUE(IsStatCoupled(d.direction, d.speed));
  }
}

TEST(GeometryProperties, MatchesOracle) {
  const MotionConfig cfg;
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 1000; ++seed) {
    testing::Rng rng(seed);
    const Track track = testing::RandomTrack(rng, 2, 2);
    const OracleReading reading = OracleClassify(track, cfg);
    if (!ClearOfThresholds(reading, cfg, 0.1)) continue;
    ASSERT_EQ(ComputeMotionDescriptor(track, cfg), reading.descriptor) << seed;
    ++checked;
  }
}

}  // namespace
}  // namespace stt

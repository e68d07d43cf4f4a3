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

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "stt/rouge.h"
#include "test_support.h"

namespace stt {
namespace {

using D = Direction;
using S = Speed;
using C = Scale;

constexpr double kTol = 1e-12;

VideoRecord DuckRecord() {
  VideoRecord r;
  r.video_id = "duck";
  r.duration = 10.0;
  r.question = "Where does the duck go?";
  r.answer_kind = AnswerKind::kMcq;
  r.gt_answer = "B";
  r.objects.push_back({"duck",
                       {{2.0, {0.1, 0.4, 0.2, 0.5}},
                        {3.0, {0.2, 0.4, 0.3, 0.5}},
                        {4.0, {0.3, 0.4, 0.4, 0.5}}}});
  return r;
}

std::string Evidence(const std::string& name, const Box& b, double t) {
  return "<obj>" + name + "</obj><box>[" + FormatNumber(b.x1) + "," +
         FormatNumber(b.y1) + "," + FormatNumber(b.x2) + "," + FormatNumber(b.y2) +
         "]</box> at <t>" + FormatNumber(t) + "</t>s ";
}

std::string Tag(const std::string& name, const MotionDescriptor& d) {
  return "<motion obj=\"" + name + "\" dir=\"" + std::string(ToString(d.direction)) +
         "\" speed=\"" + std::string(ToString(d.speed)) + "\" scale=\"" +
         std::string(ToString(d.scale)) + "\"/>";
}

// Prediction that repeats every keyframe of `record` and tags each object
// with its true descriptor.
std::string PerfectPrediction(const VideoRecord& record) {
  std::string out = "<think>";
  const auto truth = GroundTruthDescriptors(record, MotionConfig{});
  for (const ObjectAnnotation& o : record.objects) {
    for (const TimedBox& kf : o.keyframes) out += Evidence(o.name, kf.box, kf.timestamp);
    const auto it = truth.find(NormalizeObjectName(o.name));
    if (it != truth.end()) {
      for (const MotionDescriptor& d : it->second) out += Tag(o.name, d);
    }
  }
  return out + "</think><answer>" + record.gt_answer + "</answer>";
}

MotionTagMap Tags(const std::string& name, std::vector<MotionDescriptor> ds) {
  MotionTagMap map;
  for (const MotionDescriptor& d : ds) {
    map[name].push_back({name, d.direction, d.speed, d.scale});
  }
  return map;
}

VideoRecord WithDescriptors(VideoRecord r, std::vector<MotionDescriptor> ds) {
  r.descriptors = DescriptorMap{{"duck", std::move(ds)}};
  return r;
}

TEST(RewardConstants, MatchPublishedValues) {
  EXPECT_EQ(kTrajectoryDirectionWeight, 0.4);
  EXPECT_EQ(kTrajectorySpeedWeight, 0.3);
  EXPECT_EQ(kTrajectoryScaleWeight, 0.3);
  EXPECT_EQ(kGroundingDirectionWeight, 0.5);
  EXPECT_EQ(kGroundingSpeedWeight, 0.3);
  EXPECT_EQ(kGroundingScaleWeight, 0.2);
  EXPECT_EQ(kExactMatchCredit, 1.0);
  EXPECT_EQ(kAdjacentMatchCredit, 0.5);
  EXPECT_EQ(kMismatchCredit, 0.0);
}

TEST(RewardFormat, Examples) {
  EXPECT_EQ(RewardFormat("<think>ok</think><answer>B</answer>"), 1.0);
  EXPECT_EQ(RewardFormat("<think>ok</think><answer>B"), 0.0);
  EXPECT_EQ(RewardFormat("<think><motion obj=\"a\" dir=\"UP\" speed=\"slow\" "
                         "scale=\"stable\"/></think><answer>B</answer>"),
            0.0);
}

TEST(RewardAccuracy, Examples) {
  VideoRecord mcq = DuckRecord();
  EXPECT_EQ(RewardAccuracy("B", mcq), 1.0);
  EXPECT_EQ(RewardAccuracy("(b)", mcq), 1.0);
  EXPECT_EQ(RewardAccuracy(" B. ", mcq), 1.0);
  EXPECT_EQ(RewardAccuracy("C", mcq), 0.0);
  EXPECT_EQ(RewardAccuracy("", mcq), 0.0);

  VideoRecord freeform = DuckRecord();
  freeform.answer_kind = AnswerKind::kFreeform;
  freeform.gt_answer = "the cat";
  EXPECT_NEAR(RewardAccuracy("the cat sat", freeform), 0.8, 1e-9);
  EXPECT_EQ(RewardAccuracy("a dog ran", freeform), 0.0);
  EXPECT_EQ(RewardAccuracy("The CAT", freeform), 1.0);
}

TEST(NormalizeChoice, Forms) {
  EXPECT_EQ(NormalizeChoice("b) a cat"), "B");
  EXPECT_EQ(NormalizeChoice("  Left   Side. "), "left side");
  EXPECT_EQ(NormalizeChoice(""), "");
}

TEST(Rouge, Examples) {
  EXPECT_EQ(RougeLF1("the duck swims east", "the duck swims east"), 1.0);
  EXPECT_EQ(RougeLF1("alpha beta", "gamma delta"), 0.0);
  EXPECT_NEAR(RougeLF1("the cat sat", "the cat"), 0.8, 1e-9);
  EXPECT_EQ(RougeLF1("", ""), 0.0);
  EXPECT_EQ(RougeLF1("...", "x"), 0.0);
  EXPECT_EQ(TokenizeForRouge("It's 2 o'clock!"),
            (std::vector<std::string>{"it", "s", "2", "o", "clock"}));
  EXPECT_EQ(LcsLength({"a", "b", "c", "d"}, {"b", "d", "a"}), 2u);
}

TEST(RewardTemporal, Examples) {
  const VideoRecord r = DuckRecord();  // sigma = max(1, 0.1 * 10) = 1
  const RewardConfig cfg;
  TrackMap exact;
  for (const TimedBox& kf : r.objects[0].keyframes) exact["duck"].push_back(kf);
  EXPECT_EQ(RewardTemporal(exact, r, cfg), 1.0);

  VideoRecord single = r;
  single.objects[0].keyframes.resize(1);
  TrackMap off;
  off["duck"].push_back({3.0, {0.1, 0.4, 0.2, 0.5}});
  EXPECT_EQ(RewardTemporal(off, single, cfg), 0.0);
  off["duck"][0].timestamp = 2.25;
  EXPECT_NEAR(RewardTemporal(off, single, cfg), 0.75, kTol);

  EXPECT_EQ(RewardTemporal({}, r, cfg), 0.0);
  VideoRecord two_objects = r;
  two_objects.objects.push_back({"cat", {{1.0, {0, 0, 0.1, 0.1}}}});
  EXPECT_NEAR(RewardTemporal(exact, two_objects, cfg), 0.75, kTol);

  VideoRecord empty = r;
  empty.objects.clear();
  EXPECT_EQ(RewardTemporal(exact, empty, cfg), 0.0);
}

TEST(RewardTemporal, SigmaScalesWithDuration) {
  VideoRecord r = DuckRecord();
  r.duration = 100.0;  // sigma = 10
  r.objects[0].keyframes.resize(1);
  TrackMap pred;
  pred["duck"].push_back({7.0, {0.1, 0.4, 0.2, 0.5}});
  EXPECT_NEAR(RewardTemporal(pred, r, {}), 0.5, kTol);
}

TEST(RewardSpatial, Examples) {
  VideoRecord r = DuckRecord();
  r.objects[0].keyframes = {{1.0, {0.0, 0.0, 0.5, 0.5}}};
  const RewardConfig cfg;
  TrackMap pred;
  pred["duck"].push_back({1.0, {0.0, 0.0, 0.5, 0.5}});
  EXPECT_EQ(RewardSpatial(pred, r, cfg), 1.0);
  pred["duck"][0] = {1.5, {0.25, 0.0, 0.75, 0.5}};
  EXPECT_NEAR(RewardSpatial(pred, r, cfg), 1.0 / 3.0, kTol);
  pred["duck"][0] = {2.0, {0.0, 0.0, 0.5, 0.5}};
  EXPECT_EQ(RewardSpatial(pred, r, cfg), 1.0);  // gate is inclusive
  pred["duck"][0] = {2.5, {0.0, 0.0, 0.5, 0.5}};
  EXPECT_EQ(RewardSpatial(pred, r, cfg), 0.0);
}

TEST(BinMatchScore, Examples) {
  EXPECT_EQ(BinMatchScore(D::kW, D::kW), 1.0);
  EXPECT_EQ(BinMatchScore(D::kNW, D::kW), 0.5);
  EXPECT_EQ(BinMatchScore(D::kE, D::kW), 0.0);
  EXPECT_EQ(BinMatchScore(D::kSE, D::kE), 0.5);
  EXPECT_EQ(BinMatchScore(D::kStat, D::kStat), 1.0);
  EXPECT_EQ(BinMatchScore(D::kStat, D::kE), 0.0);
  EXPECT_EQ(BinMatchScore(S::kSlow, S::kModerate), 0.5);
  EXPECT_EQ(BinMatchScore(S::kSlow, S::kFast), 0.0);
  EXPECT_EQ(BinMatchScore(S::kStationary, S::kSlow), 0.5);
  EXPECT_EQ(BinMatchScore(C::kApproaching, C::kReceding), 0.0);
  EXPECT_EQ(BinMatchScore(C::kApproaching, C::kStable), 0.5);
  EXPECT_EQ(BinMatchScore("W", "NW", BinKind::kDirection), 0.5);
  EXPECT_EQ(BinMatchScore("fast", "fast", BinKind::kSpeed), 1.0);
  EXPECT_THROW(BinMatchScore("UP", "W", BinKind::kDirection), VocabularyMismatch);
  EXPECT_THROW(BinMatchScore("W", "slow", BinKind::kDirection), VocabularyMismatch);
  EXPECT_THROW(BinMatchScore("slow", "stable", BinKind::kScale), VocabularyMismatch);
}

TEST(BinMatchScore, Symmetric) {
  for (D a : kAllDirections) {
    for (D b : kAllDirections) EXPECT_EQ(BinMatchScore(a, b), BinMatchScore(b, a));
  }
  for (S a : kAllSpeeds) {
    for (S b : kAllSpeeds) EXPECT_EQ(BinMatchScore(a, b), BinMatchScore(b, a));
  }
  for (C a : kAllScales) {
    for (C b : kAllScales) EXPECT_EQ(BinMatchScore(a, b), BinMatchScore(b, a));
  }
}

TEST(RewardTrajectory, Examples) {
  const RewardConfig cfg;
  const MotionDescriptor truth{D::kE, S::kModerate, C::kStable};
  const VideoRecord r = WithDescriptors(DuckRecord(), {truth});
  EXPECT_EQ(RewardTrajectory(Tags("duck", {truth}), r, cfg), 1.0);
  EXPECT_NEAR(RewardTrajectory(Tags("duck", {{D::kE, S::kSlow, C::kStable}}), r, cfg),
              0.85, kTol);
  EXPECT_NEAR(
      RewardTrajectory(Tags("duck", {{D::kNE, S::kFast, C::kStable}}), r, cfg),
      0.65, kTol);
  EXPECT_EQ(RewardTrajectory({}, r, cfg), 0.0);
}

TEST(RewardTrajectory, UnpairedSlotsScoreZero) {
  const RewardConfig cfg;
  const MotionDescriptor truth{D::kE, S::kModerate, C::kStable};
  const VideoRecord r = WithDescriptors(DuckRecord(), {truth});
  EXPECT_NEAR(RewardTrajectory(Tags("duck", {truth, truth}), r, cfg), 0.5, kTol);
  const VideoRecord two = WithDescriptors(DuckRecord(), {truth, truth});
  EXPECT_NEAR(RewardTrajectory(Tags("duck", {truth}), two, cfg), 0.5, kTol);
}

TEST(RewardTrajectory, ComputesMissingTruth) {
  const VideoRecord r = DuckRecord();  // moves east, 0.1 per second
  const auto truth = GroundTruthDescriptors(r, {});
  ASSERT_EQ(truth.at("duck").size(), 1u);
  EXPECT_EQ(truth.at("duck")[0].direction, D::kE);
  EXPECT_EQ(RewardTrajectory(Tags("duck", truth.at("duck")), r, {}), 1.0);
}

TEST(RewardTrajectory, SingleKeyframeObjectsExcluded) {
  VideoRecord r = DuckRecord();
  r.objects.push_back({"cat", {{1.0, {0, 0, 0.1, 0.1}}}});
  const auto truth = GroundTruthDescriptors(r, {});
  EXPECT_EQ(truth.size(), 1u);
  EXPECT_EQ(RewardTrajectory(Tags("duck", truth.at("duck")), r, {}), 1.0);
}

// Independent re-statement of the trajectory reward for small cases.
double ReferenceTrajectory(
    const std::map<std::string, std::vector<MotionDescriptor>>& predicted,
    const std::map<std::string, std::vector<MotionDescriptor>>& truth) {
  auto credit = [](int distance) {
    return distance == 0 ? 1.0 : distance == 1 ? 0.5 : 0.0;
  };
  auto dir_distance = [](D a, D b) {
    if (a == D::kStat || b == D::kStat) return a == b ? 0 : 9;
    const int d = std::abs(static_cast<int>(a) - static_cast<int>(b));
    return std::min(d, 8 - d);
  };
  if (truth.empty()) return 0.0;
  double total = 0.0;
  for (const auto& [name, gt] : truth) {
    const auto it = predicted.find(name);
    const std::vector<MotionDescriptor> pred =
        it == predicted.end() ? std::vector<MotionDescriptor>{} : it->second;
    const std::size_t slots = std::max(pred.size(), gt.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < slots; ++i) {
      if (i >= pred.size() || i >= gt.size()) continue;
      sum += 0.4 * credit(dir_distance(pred[i].direction, gt[i].direction)) +
             0.3 * credit(std::abs(static_cast<int>(pred[i].speed) -
                                   static_cast<int>(gt[i].speed))) +
             0.3 * credit(std::abs(static_cast<int>(pred[i].scale) -
                                   static_cast<int>(gt[i].scale)));
    }
    total += sum / slots;
  }
  return total / truth.size();
}

TEST(RewardTrajectory, MatchesReferenceOnSmallCases) {
  testing::Rng rng(21);
  const std::array<std::string, 3> names = {"a", "b", "c"};
  for (int i = 0; i < 3000; ++i) {
    VideoRecord r = DuckRecord();
    r.objects.clear();
    DescriptorMap truth;
    std::map<std::string, std::vector<MotionDescriptor>> predicted;
    MotionTagMap tags;
    const int objects = testing::UniformInt(rng, 1, 3);
    for (int o = 0; o < objects; ++o) {
      r.objects.push_back({names[o], {{0.0, {0, 0, 0.1, 0.1}}, {1.0, {0, 0, 0.1, 0.1}}}});
      const int gt_count = testing::UniformInt(rng, 1, 4);
      for (int k = 0; k < gt_count; ++k) {
        truth[names[o]].push_back(testing::RandomDescriptor(rng));
      }
      const int pred_count = testing::UniformInt(rng, 0, 4);
      for (int k = 0; k < pred_count; ++k) {
        const MotionTag tag = testing::RandomTag(rng, names[o]);
        predicted[names[o]].push_back(tag.descriptor());
        tags[names[o]].push_back(tag);
      }
    }
    r.descriptors = truth;
    const double expected = ReferenceTrajectory(predicted, truth);
    ASSERT_NEAR(RewardTrajectory(tags, r, {}), expected, kTol) << i;
  }
}

TEST(RewardTrajectory, ExactNeverWorseThanAdjacent) {
  testing::Rng rng(22);
  for (int i = 0; i < 1000; ++i) {
    const MotionDescriptor truth = testing::RandomDescriptor(rng);
    const VideoRecord r = WithDescriptors(DuckRecord(), {truth});
    MotionDescriptor pred = testing::RandomDescriptor(rng);
    const double before = RewardTrajectory(Tags("duck", {pred}), r, {});
    switch (testing::UniformInt(rng, 0, 2)) {
      case 0:
        if (BinMatchScore(pred.direction, truth.direction) == 0.5) {
          pred.direction = truth.direction;
        }
        break;
      case 1:
        if (BinMatchScore(pred.speed, truth.speed) == 0.5) pred.speed = truth.speed;
        break;
      default:
        if (BinMatchScore(pred.scale, truth.scale) == 0.5) pred.scale = truth.scale;
    }
    EXPECT_GE(RewardTrajectory(Tags("duck", {pred}), r, {}), before);
  }
}

TEST(RewardGrounding, Examples) {
  const MotionDescriptor a{D::kE, S::kModerate, C::kStable};
  const MotionDescriptor b{D::kW, S::kFast, C::kReceding};
  EXPECT_EQ(RewardGrounding(Tags("duck", {a}), Tags("duck", {a})), 0.0);
  EXPECT_EQ(RewardGrounding(Tags("duck", {a}), Tags("duck", {b})), 1.0);
  EXPECT_EQ(RewardGrounding(Tags("duck", {a}), {}), 1.0);
  EXPECT_EQ(RewardGrounding({}, Tags("duck", {a})), 0.0);
  EXPECT_EQ(GroundingPairScore(a, {D::kW, S::kModerate, C::kStable}), 0.5);
  EXPECT_EQ(GroundingPairScore(a, {D::kE, S::kSlow, C::kStable}), 0.3);
  EXPECT_EQ(GroundingPairScore(a, {D::kE, S::kModerate, C::kApproaching}), 0.2);
  // Second original tag has no masked counterpart.
  EXPECT_EQ(RewardGrounding(Tags("duck", {a, a}), Tags("duck", {a})), 0.5);
}

TEST(RewardGrounding, Laws) {
  testing::Rng rng(23);
  for (int i = 0; i < 500; ++i) {
    const MotionTagMap map = testing::RandomTagMap(rng);
    EXPECT_EQ(RewardGrounding(map, map), 0.0);
    if (!map.empty()) EXPECT_EQ(RewardGrounding(map, {}), 1.0);
    const double g = RewardGrounding(map, testing::RandomTagMap(rng));
    EXPECT_GE(g, 0.0);
    EXPECT_LE(g, 1.0);
  }
}

TEST(Score, PerfectPredictionWithIdenticalMaskedChain) {
  const VideoRecord r = DuckRecord();
  const std::string pred = PerfectPrediction(r);
  const ScoreResult result = Score(pred, r, pred, {});
  const RewardBreakdown& b = result.breakdown;
  EXPECT_EQ(b.r_fmt, 1.0);
  EXPECT_EQ(b.r_acc, 1.0);
  EXPECT_EQ(b.r_t, 1.0);
  EXPECT_EQ(b.r_s, 1.0);
  EXPECT_EQ(b.r_traj, 1.0);
  EXPECT_EQ(b.r_ground, 0.0);
  EXPECT_EQ(b.total(), 5.0);
  EXPECT_EQ(result.per_object.at("duck").ground, 0.0);
}

TEST(Score, MaskedChainWithoutObjectsReachesMaximum) {
  const VideoRecord r = DuckRecord();
  const ScoreResult result = Score(PerfectPrediction(r), r,
                                   "<think>nothing moves</think><answer>B</answer>", {});
  EXPECT_EQ(result.breakdown.r_ground, 1.0);
  EXPECT_EQ(result.breakdown.total(), 6.0);
}

TEST(Score, EmptyPrediction) {
  const ScoreResult result = Score("", DuckRecord(), std::nullopt, {});
  EXPECT_EQ(result.breakdown, RewardBreakdown{});
  EXPECT_FALSE(result.diagnostics.valid);
}

TEST(Score, UnparseablePredictionKeepsAnswerTail) {
  const ScoreResult result =
      Score("<think>never closed <answer>B</answer>", DuckRecord(), std::nullopt, {});
  EXPECT_EQ(result.breakdown.r_acc, 1.0);
  EXPECT_EQ(result.breakdown.r_fmt, 0.0);
  EXPECT_EQ(result.breakdown.r_t, 0.0);
}

TEST(Score, NoMaskedChainMeansNoGrounding) {
  const VideoRecord r = DuckRecord();
  EXPECT_EQ(Score(PerfectPrediction(r), r, std::nullopt, {}).breakdown.r_ground, 0.0);
  EXPECT_EQ(Score(PerfectPrediction(r), r, "garbage", {}).breakdown.r_ground, 0.0);
}

TEST(ScoreProperties, RangeAndDeterminism) {
  testing::Rng rng(24);
  for (int i = 0; i < 500; ++i) {
    const VideoRecord r = testing::RandomRecord(rng, i);
    const std::string pred = testing::RandomPrediction(rng, r);
    const std::string masked = testing::RandomPrediction(rng, r);
    const RewardBreakdown b = Score(pred, r, masked, {}).breakdown;
    for (double v : {b.r_fmt, b.r_acc, b.r_t, b.r_s, b.r_traj, b.r_ground}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    EXPECT_EQ(b.total(), b.r_acc + (b.r_t + b.r_s + (b.r_traj + b.r_ground)) + b.r_fmt);
    EXPECT_LE(b.total(), 6.0);
    EXPECT_EQ(Score(pred, r, masked, {}).breakdown, b);
  }
}

TEST(RewardConfig, Validation) {
  EXPECT_NO_THROW(CheckRewardConfig({}));
  RewardConfig bad;
  bad.spatial_gate = 0.0;
  EXPECT_THROW(CheckRewardConfig(bad), std::invalid_argument);
  bad = {};
  bad.temporal_sigma_floor = -1.0;
  EXPECT_THROW(CheckRewardConfig(bad), std::invalid_argument);
}

}  // namespace
}  // namespace stt

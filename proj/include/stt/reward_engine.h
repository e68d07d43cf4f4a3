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

#ifndef STT_REWARD_ENGINE_H_
#define STT_REWARD_ENGINE_H_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "stt/records.h"
#include "stt/trace_grammar.h"
#include "stt/track_geometry.h"
#include "stt/vocabulary.h"

namespace stt {

// Per-attribute weights of the trajectory reward.
inline constexpr double kTrajectoryDirectionWeight = 0.4;
inline constexpr double kTrajectorySpeedWeight = 0.3;
inline constexpr double kTrajectoryScaleWeight = 0.3;

// Per-attribute weights of the dual-chain grounding reward.
inline constexpr double kGroundingDirectionWeight = 0.5;
inline constexpr double kGroundingSpeedWeight = 0.3;
inline constexpr double kGroundingScaleWeight = 0.2;

// Bin-match credits.
inline constexpr double kExactMatchCredit = 1.0;
inline constexpr double kAdjacentMatchCredit = 0.5;
inline constexpr double kMismatchCredit = 0.0;

struct RewardConfig {
  double temporal_sigma_floor = 1.0;     // seconds
  double temporal_sigma_fraction = 0.1;  // of the video duration
  double spatial_gate = 1.0;             // seconds
  MotionConfig motion;

  friend bool operator==(const RewardConfig&, const RewardConfig&) = default;
};

// Throws std::invalid_argument when any field is non-positive or the motion
// thresholds are out of order.
void CheckRewardConfig(const RewardConfig& config);

struct RewardBreakdown {
  double r_fmt = 0.0;
  double r_acc = 0.0;
  double r_t = 0.0;
  double r_s = 0.0;
  double r_traj = 0.0;
  double r_ground = 0.0;

  double r_motion() const { return r_traj + r_ground; }
  double r_thk() const { return r_t + r_s + r_motion(); }
  double total() const { return r_acc + r_thk() + r_fmt; }

  friend bool operator==(const RewardBreakdown&,
                         const RewardBreakdown&) = default;
};

// Per-object contributions. A component is absent when the object does not
// take part in it.
struct ObjectScores {
  std::optional<double> traj;
  std::optional<double> ground;

  friend bool operator==(const ObjectScores&, const ObjectScores&) = default;
};

struct ScoreResult {
  RewardBreakdown breakdown;
  FormatReport diagnostics;
  std::map<std::string, ObjectScores> per_object;
};

enum class BinKind { kDirection, kSpeed, kScale };

class VocabularyMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// 1.0 for identical bins, 0.5 for neighbours, 0.0 otherwise. Directions are
// neighbours when one compass step apart; STAT neighbours nothing. Speed and
// scale bins are neighbours when their ranks differ by one.
double BinMatchScore(Direction predicted, Direction truth);
double BinMatchScore(Speed predicted, Speed truth);
double BinMatchScore(Scale predicted, Scale truth);

// String form. Throws VocabularyMismatch when either value is outside the
// vocabulary of `kind`.
double BinMatchScore(std::string_view predicted, std::string_view truth,
                     BinKind kind);

// Weighted bin agreement of one predicted descriptor against the truth.
double TrajectoryPairScore(const MotionDescriptor& predicted,
                           const MotionDescriptor& truth);

// Weighted attribute disagreement between an original and a masked tag.
double GroundingPairScore(const MotionDescriptor& original,
                          const MotionDescriptor& masked);

// 1.0 iff ValidateFormat(source) is valid.
double RewardFormat(std::string_view source);

// Exact option match for MCQ records, ROUGE-L F1 otherwise.
double RewardAccuracy(std::string_view predicted_answer,
                      const GroundTruthRecord& record);

// Canonical MCQ option: a lone leading letter ("(b)", "B.", "b) cat") is
// uppercased; anything else is lowercased and whitespace-collapsed.
std::string NormalizeChoice(std::string_view answer);

// Mean linear proximity max(0, 1 - |dt| / sigma) over ground-truth keyframes,
// where dt is measured to the nearest same-object predicted timestamp and
// sigma = max(floor, fraction * duration).
double RewardTemporal(const TrackMap& predicted, const GroundTruthRecord& record,
                      const RewardConfig& config);

// Mean IoU over ground-truth keyframes against the nearest same-object
// prediction, counted only when that prediction is within the gate.
double RewardSpatial(const TrackMap& predicted, const GroundTruthRecord& record,
                     const RewardConfig& config);

// Ground-truth descriptor lists of every object with at least two keyframes,
// keyed by normalized name. Supplied descriptors take precedence; otherwise
// they are computed from the keyframes. Objects whose descriptor cannot be
// computed are left out.
std::map<std::string, std::vector<MotionDescriptor>> GroundTruthDescriptors(
    const GroundTruthRecord& record, const MotionConfig& config);

// Order-of-appearance pairing of predicted tags with ground-truth
// descriptors per object; unpaired slots score zero.
double RewardTrajectory(const MotionTagMap& predicted,
                        const GroundTruthRecord& record,
                        const RewardConfig& config,
                        std::map<std::string, double>* per_object = nullptr);

// Dual-chain grounding over the objects tagged in the original chain.
double RewardGrounding(const MotionTagMap& original, const MotionTagMap& masked,
                       std::map<std::string, double>* per_object = nullptr);

// Full reward stack. Never throws on malformed predictions: an unparseable
// prediction scores zero everywhere except r_acc, which falls back to the
// text after the last <answer>. A missing or unparseable masked chain yields
// r_ground = 0.
ScoreResult Score(std::string_view prediction, const GroundTruthRecord& record,
                  std::optional<std::string_view> masked_prediction,
                  const RewardConfig& config);

}  // namespace stt

#endif  // STT_REWARD_ENGINE_H_

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

#ifndef STT_TRACE_GRAMMAR_H_
#define STT_TRACE_GRAMMAR_H_

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stt/box.h"
#include "stt/vocabulary.h"

namespace stt {

// Verbatim text between tags inside the think block.
struct FreeText {
  std::string text;

  friend bool operator==(const FreeText&, const FreeText&) = default;
};

// `<obj>name</obj><box>[x1,y1,x2,y2]</box> at <t>seconds</t>s`
struct EvidenceItem {
  std::string object_name;
  Box box;
  double timestamp = 0.0;

  friend bool operator==(const EvidenceItem&, const EvidenceItem&) = default;
};

// `<motion obj="..." dir="..." speed="..." scale="..."/>`
struct MotionTag {
  std::string object_name;
  Direction direction = Direction::kStat;
  Speed speed = Speed::kStationary;
  Scale scale = Scale::kStable;

  MotionDescriptor descriptor() const { return {direction, speed, scale}; }

  friend bool operator==(const MotionTag&, const MotionTag&) = default;
};

using Segment = std::variant<FreeText, EvidenceItem, MotionTag>;

// A parsed `<think>R</think><answer>A</answer>` response.
struct Trace {
  std::vector<Segment> think_segments;
  std::string answer;

  friend bool operator==(const Trace&, const Trace&) = default;
};

// Half-open character-offset range [begin, end) into the source text.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct Violation {
  std::string rule_id;
  SourceSpan location;
  std::string message;
};

struct FormatReport {
  bool valid = true;
  std::vector<Violation> violations;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string rule_id, SourceSpan location, const std::string& msg);

  const std::string& rule_id() const { return rule_id_; }
  const SourceSpan& location() const { return location_; }

 private:
  std::string rule_id_;
  SourceSpan location_;
};

// Rule identifiers reported by ValidateFormat and carried by ParseError.
namespace rules {
inline constexpr std::string_view kMissingThink = "missing-think";
inline constexpr std::string_view kUnbalancedThink = "unbalanced-think";
inline constexpr std::string_view kNestedThink = "nested-think";
inline constexpr std::string_view kMultipleThink = "multiple-think";
inline constexpr std::string_view kMissingAnswer = "missing-answer";
inline constexpr std::string_view kUnbalancedAnswer = "unbalanced-answer";
inline constexpr std::string_view kMultipleAnswer = "multiple-answer";
inline constexpr std::string_view kAnswerContainsTag = "answer-contains-tag";
inline constexpr std::string_view kStrayContent = "stray-content";
inline constexpr std::string_view kStrayTag = "stray-tag";
inline constexpr std::string_view kMalformedEvidence = "malformed-evidence";
inline constexpr std::string_view kEmptyObjectName = "empty-object-name";
inline constexpr std::string_view kBoxArity = "box-arity";
inline constexpr std::string_view kBoxRange = "box-range";
inline constexpr std::string_view kBoxDegenerate = "box-degenerate";
inline constexpr std::string_view kBadNumber = "bad-number";
inline constexpr std::string_view kNegativeTimestamp = "negative-timestamp";
inline constexpr std::string_view kMalformedMotion = "malformed-motion";
inline constexpr std::string_view kMissingMotionAttr = "missing-motion-attr";
inline constexpr std::string_view kDuplicateMotionAttr =
    "duplicate-motion-attr";
inline constexpr std::string_view kUnknownMotionAttr = "unknown-motion-attr";
inline constexpr std::string_view kBadDirectionVocab = "bad-direction-vocab";
inline constexpr std::string_view kBadSpeedVocab = "bad-speed-vocab";
inline constexpr std::string_view kBadScaleVocab = "bad-scale-vocab";
inline constexpr std::string_view kStatCoupling = "stat-coupling";
}  // namespace rules

// Parses model output into a Trace. Whitespace is tolerated around the two
// top-level blocks and inside evidence triples. Throws ParseError on broken
// think/answer structure, unterminated or stray tags, boxes that do not hold
// exactly four numbers in [0, 1], and motion attributes outside their
// vocabularies. Degenerate boxes, negative timestamps and STAT/speed
// mismatches parse successfully; ValidateFormat reports them.
Trace ParseTrace(std::string_view source);

// As above, additionally reporting where each think segment sits in
// `source` (one span per element of think_segments).
Trace ParseTrace(std::string_view source,
                 std::vector<SourceSpan>* segment_spans);

// Canonical surface form. Attributes are emitted as obj, dir, speed, scale;
// numbers carry at most three decimals.
std::string SerializeTrace(const Trace& trace);

// Lints `source` without throwing. Collects every structural, lexical and
// semantic violation; the report is valid iff no violation was found.
FormatReport ValidateFormat(std::string_view source);

// Lowercases ASCII, trims, and collapses internal whitespace runs to one
// space. Object identities are compared on this form.
std::string NormalizeObjectName(std::string_view name);

struct TimedBox {
  double timestamp = 0.0;
  Box box;

  friend bool operator==(const TimedBox&, const TimedBox&) = default;
};

using TrackMap = std::map<std::string, std::vector<TimedBox>>;
using MotionTagMap = std::map<std::string, std::vector<MotionTag>>;

// Groups evidence by normalized object name, ascending in time. When a
// timestamp repeats, the later occurrence in the trace wins.
TrackMap ExtractTracks(const Trace& trace);

// Groups motion tags by normalized object name in order of appearance.
MotionTagMap ExtractMotionTags(const Trace& trace);

// Shortest decimal rendering with at most three fractional digits.
std::string FormatNumber(double value);

}  // namespace stt

#endif  // STT_TRACE_GRAMMAR_H_

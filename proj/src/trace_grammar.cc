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

#include "stt/trace_grammar.h"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <utility>

namespace stt {
namespace {

constexpr std::string_view kThinkOpen = "<think>";
constexpr std::string_view kThinkClose = "</think>";
constexpr std::string_view kAnswerOpen = "<answer>";
constexpr std::string_view kAnswerClose = "</answer>";
constexpr std::string_view kObjOpen = "<obj>";
constexpr std::string_view kObjClose = "</obj>";
constexpr std::string_view kBoxOpen = "<box>";
constexpr std::string_view kBoxClose = "</box>";
constexpr std::string_view kTimeOpen = "<t>";
constexpr std::string_view kTimeClose = "</t>";
constexpr std::string_view kMotionOpen = "<motion";

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && IsSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsSpace(s.back())) s.remove_suffix(1);
  return s;
}

// Tags that may only appear as part of a larger construct inside the think
// block. Seeing one on its own is a structural error.
struct StrayTag {
  std::string_view text;
  std::string_view rule;
  bool evidence_part;
};
constexpr std::array<StrayTag, 11> kStrayTags = {{
    {kThinkOpen, rules::kNestedThink, false},
    {kAnswerOpen, rules::kStrayTag, false},
    {kAnswerClose, rules::kStrayTag, false},
    {kObjClose, rules::kStrayTag, true},
    {kBoxOpen, rules::kStrayTag, true},
    {kBoxClose, rules::kStrayTag, true},
    {kTimeOpen, rules::kStrayTag, true},
    {kTimeClose, rules::kStrayTag, true},
    {"</motion", rules::kStrayTag, false},
    {"</think", rules::kStrayTag, false},
    {"</obj", rules::kStrayTag, true},
}};

// Thrown internally in lint mode to abandon the current construct.
struct SyntaxFailure {
  std::size_t position;
};

class Scanner {
 public:
  Scanner(std::string_view source, bool strict,
          std::vector<SourceSpan>* spans = nullptr)
      : src_(source), strict_(strict), spans_(spans) {}

  Trace Run() {
    Trace trace;
    const std::size_t n = src_.size();
    const std::size_t think_at = src_.find(kThinkOpen);
    if (think_at == std::string_view::npos) {
      Report(rules::kMissingThink, 0, n, "no <think> block");
      return trace;
    }
    if (SkipSpace(0, think_at) != think_at) {
      Report(rules::kStrayContent, SkipSpace(0, think_at), think_at,
             "content before <think>");
    }

    const std::size_t body_begin = think_at + kThinkOpen.size();
    const std::size_t think_close = src_.find(kThinkClose, body_begin);
    std::size_t after_think;
    if (think_close == std::string_view::npos) {
      Report(rules::kUnbalancedThink, think_at, body_begin,
             "<think> is never closed");
      const std::size_t answer_at = src_.find(kAnswerOpen, body_begin);
      const std::size_t body_end =
          answer_at == std::string_view::npos ? n : answer_at;
      ScanBody(body_begin, body_end, &trace);
      after_think = body_end;
    } else {
      ScanBody(body_begin, think_close, &trace);
      after_think = think_close + kThinkClose.size();
    }

    const std::size_t answer_at = src_.find(kAnswerOpen, after_think);
    const std::size_t gap_begin = SkipSpace(after_think, n);
    if (answer_at == std::string_view::npos) {
      Report(rules::kMissingAnswer, after_think, n, "no <answer> block");
      return trace;
    }
    if (gap_begin != answer_at) {
      const std::string_view gap = src_.substr(gap_begin, answer_at - gap_begin);
      if (gap.find(kThinkOpen) != std::string_view::npos) {
        Report(rules::kMultipleThink, gap_begin, answer_at,
               "more than one <think> block");
      } else {
        Report(rules::kStrayContent, gap_begin, answer_at,
               "content between </think> and <answer>");
      }
    }

    const std::size_t answer_begin = answer_at + kAnswerOpen.size();
    const std::size_t answer_close = src_.find(kAnswerClose, answer_begin);
    const std::size_t answer_end =
        answer_close == std::string_view::npos ? n : answer_close;
    if (answer_close == std::string_view::npos) {
      Report(rules::kUnbalancedAnswer, answer_at, answer_begin,
             "<answer> is never closed");
    }
    trace.answer = std::string(src_.substr(answer_begin, answer_end - answer_begin));
    for (std::string_view tag : {kThinkOpen, kThinkClose, kAnswerOpen}) {
      const std::size_t hit = src_.substr(0, answer_end).find(tag, answer_begin);
      if (hit != std::string_view::npos) {
        Report(rules::kAnswerContainsTag, hit, hit + tag.size(),
               "answer contains " + std::string(tag));
        break;
      }
    }
    if (answer_close == std::string_view::npos) return trace;

    const std::size_t tail = answer_close + kAnswerClose.size();
    const std::size_t rest = SkipSpace(tail, n);
    if (rest < n) {
      const std::string_view extra = src_.substr(rest);
      if (extra.find(kAnswerOpen) != std::string_view::npos) {
        Report(rules::kMultipleAnswer, rest, n, "more than one <answer> block");
      } else if (extra.find(kThinkOpen) != std::string_view::npos) {
        Report(rules::kMultipleThink, rest, n, "more than one <think> block");
      } else {
        Report(rules::kStrayContent, rest, n, "content after </answer>");
      }
    }
    return trace;
  }

  std::vector<Violation> TakeViolations() { return std::move(violations_); }

 private:
  // Structural or lexical failure: fatal in strict mode.
  void Report(std::string_view rule, std::size_t begin, std::size_t end,
              const std::string& message) {
    if (strict_) throw ParseError(std::string(rule), {begin, end}, message);
    violations_.push_back({std::string(rule), {begin, end}, message});
  }

  // Well-formed but invalid content: only the linter cares.
  void Flag(std::string_view rule, std::size_t begin, std::size_t end,
            const std::string& message) {
    if (!strict_) violations_.push_back({std::string(rule), {begin, end}, message});
  }

  [[noreturn]] void Fail(std::string_view rule, std::size_t begin,
                         std::size_t end, const std::string& message) {
    Report(rule, begin, end, message);
    throw SyntaxFailure{end};
  }

  std::size_t SkipSpace(std::size_t pos, std::size_t end) const {
    while (pos < end && IsSpace(src_[pos])) ++pos;
    return pos;
  }

  bool At(std::size_t pos, std::size_t end, std::string_view token) const {
    return pos <= end && end - pos >= token.size() &&
           src_.substr(pos, token.size()) == token;
  }

  void FlushText(std::size_t begin, std::size_t end, Trace* trace) {
    if (begin >= end) return;
    const std::string_view text = src_.substr(begin, end - begin);
    if (!trace->think_segments.empty()) {
      if (auto* prev = std::get_if<FreeText>(&trace->think_segments.back())) {
        prev->text.append(text);
        if (spans_ != nullptr) spans_->back().end = end;
        return;
      }
    }
    trace->think_segments.emplace_back(FreeText{std::string(text)});
    if (spans_ != nullptr) spans_->push_back({begin, end});
  }

  void ScanBody(std::size_t begin, std::size_t end, Trace* trace) {
    std::size_t pos = begin;
    std::size_t text_start = begin;
    bool after_broken_evidence = false;
    while (pos < end) {
      if (src_[pos] != '<') {
        ++pos;
        continue;
      }
      if (At(pos, end, kObjOpen)) {
        FlushText(text_start, pos, trace);
        try {
          pos = ParseEvidence(pos, end, trace);
          after_broken_evidence = false;
        } catch (const SyntaxFailure&) {
          after_broken_evidence = true;
          pos += kObjOpen.size();
        }
        text_start = pos;
        continue;
      }
      if (At(pos, end, kMotionOpen) &&
          (pos + kMotionOpen.size() == end ||
           IsSpace(src_[pos + kMotionOpen.size()]) ||
           src_[pos + kMotionOpen.size()] == '/' ||
           src_[pos + kMotionOpen.size()] == '>')) {
        FlushText(text_start, pos, trace);
        try {
          pos = ParseMotion(pos, end, trace);
          after_broken_evidence = false;
        } catch (const SyntaxFailure& failure) {
          const std::size_t gt = src_.find('>', failure.position);
          pos = (gt == std::string_view::npos || gt >= end) ? end : gt + 1;
        }
        text_start = pos;
        continue;
      }
      bool matched = false;
      for (const StrayTag& tag : kStrayTags) {
        if (!At(pos, end, tag.text)) continue;
        if (!(tag.evidence_part && after_broken_evidence)) {
          Report(tag.rule, pos, pos + tag.text.size(),
                 "unexpected " + std::string(tag.text));
        }
        pos += tag.text.size();
        matched = true;
        break;
      }
      if (!matched) ++pos;
    }
    FlushText(text_start, end, trace);
  }

  // Parses a number token starting at `pos` (after optional whitespace).
  std::pair<double, std::size_t> ParseNumber(std::size_t pos, std::size_t end,
                                             std::string_view what) {
    pos = SkipSpace(pos, end);
    std::size_t stop = pos;
    while (stop < end &&
           (std::isdigit(static_cast<unsigned char>(src_[stop])) ||
            src_[stop] == '.' || src_[stop] == '-' || src_[stop] == '+' ||
            src_[stop] == 'e' || src_[stop] == 'E')) {
      ++stop;
    }
    double value = 0.0;
    const char* first = src_.data() + pos;
    const char* last = src_.data() + stop;
    if (first != last && *first == '+') ++first;
    const auto result = std::from_chars(first, last, value);
    if (pos == stop || result.ec != std::errc() || result.ptr != last ||
        !std::isfinite(value)) {
      Fail(rules::kBadNumber, pos, stop == pos ? std::min(pos + 1, end) : stop,
           "expected a number in " + std::string(what));
    }
    return {value, stop};
  }

  std::size_t Expect(std::size_t pos, std::size_t end, std::string_view token,
                     std::size_t construct_begin) {
    pos = SkipSpace(pos, end);
    if (!At(pos, end, token)) {
      Fail(rules::kMalformedEvidence, construct_begin, pos,
           "expected " + std::string(token) + " in evidence item");
    }
    return pos + token.size();
  }

  std::size_t ParseEvidence(std::size_t begin, std::size_t end, Trace* trace) {
    EvidenceItem item;
    std::size_t pos = begin + kObjOpen.size();
    const std::size_t lt = src_.find('<', pos);
    if (lt == std::string_view::npos || lt >= end || !At(lt, end, kObjClose)) {
      Fail(rules::kMalformedEvidence, begin, std::min(lt, end),
           "<obj> is not closed by </obj>");
    }
    item.object_name = std::string(Trim(src_.substr(pos, lt - pos)));
    if (item.object_name.empty()) {
      Flag(rules::kEmptyObjectName, begin, lt + kObjClose.size(),
           "object name is empty");
    }
    pos = lt + kObjClose.size();

    pos = Expect(pos, end, kBoxOpen, begin);
    const std::size_t box_begin = pos;
    pos = Expect(pos, end, "[", begin);
    std::vector<double> coords;
    pos = SkipSpace(pos, end);
    if (At(pos, end, "]")) {
      ++pos;
    } else {
      while (true) {
        auto [value, stop] = ParseNumber(pos, end, "box");
        coords.push_back(value);
        pos = SkipSpace(stop, end);
        if (At(pos, end, ",")) {
          ++pos;
          continue;
        }
        if (At(pos, end, "]")) {
          ++pos;
          break;
        }
        Fail(rules::kMalformedEvidence, box_begin, pos,
             "box list must be comma separated and end with ]");
      }
    }
    const std::size_t box_end = pos;
    if (coords.size() != 4) {
      Report(rules::kBoxArity, box_begin, box_end,
             "box holds " + std::to_string(coords.size()) +
                 " numbers, expected 4");
    } else {
      item.box = {coords[0], coords[1], coords[2], coords[3]};
      if (!IsNormalized(item.box)) {
        Report(rules::kBoxRange, box_begin, box_end,
               "box coordinates must lie in [0, 1]");
      } else if (!HasPositiveArea(item.box)) {
        Flag(rules::kBoxDegenerate, box_begin, box_end,
             "box must satisfy x1 < x2 and y1 < y2");
      }
    }
    pos = Expect(pos, end, kBoxClose, begin);
    pos = Expect(pos, end, "at", begin);
    pos = Expect(pos, end, kTimeOpen, begin);
    auto [t, stop] = ParseNumber(pos, end, "timestamp");
    if (t < 0.0) {
      Flag(rules::kNegativeTimestamp, SkipSpace(pos, end), stop,
           "timestamp must be non-negative");
    }
    item.timestamp = t;
    pos = Expect(stop, end, kTimeClose, begin);
    pos = Expect(pos, end, "s", begin);
    trace->think_segments.emplace_back(std::move(item));
    if (spans_ != nullptr) spans_->push_back({begin, pos});
    return pos;
  }

  std::size_t ParseMotion(std::size_t begin, std::size_t end, Trace* trace) {
    struct Attribute {
      std::string_view value;
      std::size_t at = 0;
      bool seen = false;
    };
    Attribute obj, dir, speed, scale;
    std::size_t pos = begin + kMotionOpen.size();
    while (true) {
      pos = SkipSpace(pos, end);
      if (At(pos, end, "/>")) {
        pos += 2;
        break;
      }
      const std::size_t name_begin = pos;
      std::size_t name_end = pos;
      while (name_end < end &&
             (std::isalpha(static_cast<unsigned char>(src_[name_end])) ||
              src_[name_end] == '_' || src_[name_end] == '-')) {
        ++name_end;
      }
      if (name_end == pos) {
        Fail(rules::kMalformedMotion, begin, pos,
             "<motion> must be self-closing with name=\"value\" attributes");
      }
      const std::string_view name = src_.substr(pos, name_end - pos);
      pos = SkipSpace(name_end, end);
      if (!At(pos, end, "=")) {
        Fail(rules::kMalformedMotion, begin, pos, "expected = after attribute");
      }
      pos = SkipSpace(pos + 1, end);
      if (!At(pos, end, "\"")) {
        Fail(rules::kMalformedMotion, begin, pos,
             "attribute values must be double-quoted");
      }
      const std::size_t value_begin = pos + 1;
      const std::size_t quote = src_.find('"', value_begin);
      if (quote == std::string_view::npos || quote >= end) {
        Fail(rules::kMalformedMotion, begin, end, "unterminated attribute value");
      }
      Attribute* slot = nullptr;
      if (name == "obj") slot = &obj;
      else if (name == "dir") slot = &dir;
      else if (name == "speed") slot = &speed;
      else if (name == "scale") slot = &scale;
      if (slot == nullptr) {
        Report(rules::kUnknownMotionAttr, name_begin, quote + 1,
               "unknown motion attribute '" + std::string(name) + "'");
      } else if (slot->seen) {
        Report(rules::kDuplicateMotionAttr, value_begin, quote,
               "attribute '" + std::string(name) + "' given twice");
      } else {
        *slot = {src_.substr(value_begin, quote - value_begin), value_begin,
                 true};
      }
      pos = quote + 1;
    }

    MotionTag tag;
    bool complete = true;
    const std::pair<const char*, Attribute*> required[] = {
        {"obj", &obj}, {"dir", &dir}, {"speed", &speed}, {"scale", &scale}};
    for (const auto& [name, attr] : required) {
      if (!attr->seen) {
        Report(rules::kMissingMotionAttr, begin, pos,
               std::string("motion tag lacks '") + name + "'");
        complete = false;
      }
    }
    if (obj.seen) {
      tag.object_name = std::string(Trim(obj.value));
      if (tag.object_name.empty()) {
        Flag(rules::kEmptyObjectName, obj.at, obj.at + obj.value.size(),
             "object name is empty");
      }
    }
    auto vocab = [&](const Attribute& attr, auto parse, std::string_view rule,
                     auto* out) {
      if (!attr.seen) return;
      if (auto v = parse(attr.value)) {
        *out = *v;
      } else {
        complete = false;
        Report(rule, attr.at, attr.at + attr.value.size(),
               "'" + std::string(attr.value) + "' is not in the vocabulary");
      }
    };
    vocab(dir, ParseDirection, rules::kBadDirectionVocab, &tag.direction);
    vocab(speed, ParseSpeed, rules::kBadSpeedVocab, &tag.speed);
    vocab(scale, ParseScale, rules::kBadScaleVocab, &tag.scale);
    if (complete && !IsStatCoupled(tag.direction, tag.speed)) {
      Flag(rules::kStatCoupling, begin, pos,
           "dir=\"STAT\" must be paired with speed=\"stationary\"");
    }
    if (complete) {
      trace->think_segments.emplace_back(std::move(tag));
      if (spans_ != nullptr) spans_->push_back({begin, pos});
    }
    return pos;
  }

  std::string_view src_;
  bool strict_;
  std::vector<SourceSpan>* spans_;
  std::vector<Violation> violations_;
};

}  // namespace

ParseError::ParseError(std::string rule_id, SourceSpan location,
                       const std::string& msg)
    : std::runtime_error(rule_id + " at offset " +
                         std::to_string(location.begin) + ": " + msg),
      rule_id_(std::move(rule_id)),
      location_(location) {}

Trace ParseTrace(std::string_view source) {
  return Scanner(source, /*strict=*/true).Run();
}

Trace ParseTrace(std::string_view source,
                 std::vector<SourceSpan>* segment_spans) {
  std::vector<SourceSpan> spans;
  Trace trace = Scanner(source, /*strict=*/true, &spans).Run();
  if (segment_spans != nullptr) *segment_spans = std::move(spans);
  return trace;
}

FormatReport ValidateFormat(std::string_view source) {
  Scanner scanner(source, /*strict=*/false);
  scanner.Run();
  FormatReport report;
  report.violations = scanner.TakeViolations();
  report.valid = report.violations.empty();
  return report;
}

std::string FormatNumber(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  std::string out(buf);
  if (out.find('.') != std::string::npos) {
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  if (out == "-0") out = "0";
  return out;
}

std::string SerializeTrace(const Trace& trace) {
  std::string out;
  out.reserve(64 + trace.answer.size());
  out.append(kThinkOpen);
  for (const Segment& segment : trace.think_segments) {
    if (const auto* text = std::get_if<FreeText>(&segment)) {
      out.append(text->text);
    } else if (const auto* item = std::get_if<EvidenceItem>(&segment)) {
      out.append("<obj>").append(item->object_name).append("</obj><box>[");
      out.append(FormatNumber(item->box.x1)).append(",");
      out.append(FormatNumber(item->box.y1)).append(",");
      out.append(FormatNumber(item->box.x2)).append(",");
      out.append(FormatNumber(item->box.y2)).append("]</box> at <t>");
      out.append(FormatNumber(item->timestamp)).append("</t>s");
    } else {
      const auto& tag = std::get<MotionTag>(segment);
      out.append("<motion obj=\"").append(tag.object_name);
      out.append("\" dir=\"").append(ToString(tag.direction));
      out.append("\" speed=\"").append(ToString(tag.speed));
      out.append("\" scale=\"").append(ToString(tag.scale)).append("\"/>");
    }
  }
  out.append(kThinkClose).append(kAnswerOpen);
  out.append(trace.answer).append(kAnswerClose);
  return out;
}

std::string NormalizeObjectName(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  bool pending_space = false;
  for (char c : Trim(name)) {
    if (IsSpace(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
  }
  return out;
}

TrackMap ExtractTracks(const Trace& trace) {
  std::map<std::string, std::map<double, Box>> grouped;
  for (const Segment& segment : trace.think_segments) {
    const auto* item = std::get_if<EvidenceItem>(&segment);
    if (item == nullptr) continue;
    std::string key = NormalizeObjectName(item->object_name);
    if (key.empty()) continue;
    grouped[std::move(key)][item->timestamp] = item->box;
  }
  TrackMap tracks;
  for (auto& [name, samples] : grouped) {
    auto& track = tracks[name];
    track.reserve(samples.size());
    for (const auto& [t, box] : samples) track.push_back({t, box});
  }
  return tracks;
}

MotionTagMap ExtractMotionTags(const Trace& trace) {
  MotionTagMap tags;
  for (const Segment& segment : trace.think_segments) {
    const auto* tag = std::get_if<MotionTag>(&segment);
    if (tag == nullptr) continue;
    std::string key = NormalizeObjectName(tag->object_name);
    if (key.empty()) continue;
    tags[std::move(key)].push_back(*tag);
  }
  return tags;
}

}  // namespace stt

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

#ifndef STT_RECORDS_H_
#define STT_RECORDS_H_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "stt/trace_grammar.h"
#include "stt/vocabulary.h"

namespace stt {

enum class AnswerKind { kMcq, kFreeform };

std::string_view ToString(AnswerKind kind);

struct ObjectAnnotation {
  std::string name;
  std::vector<TimedBox> keyframes;

  friend bool operator==(const ObjectAnnotation&,
                         const ObjectAnnotation&) = default;
};

using DescriptorMap = std::map<std::string, std::vector<MotionDescriptor>>;

// One annotated video question. Used both as scoring ground truth and as the
// unit of the augmentation pipeline, where `think_trace` optionally carries a
// reasoning trace to receive motion tags.
struct VideoRecord {
  std::string video_id;
  double duration = 0.0;
  std::string question;
  AnswerKind answer_kind = AnswerKind::kFreeform;
  std::string gt_answer;
  std::vector<ObjectAnnotation> objects;
  std::optional<DescriptorMap> descriptors;
  std::optional<std::string> think_trace;

  friend bool operator==(const VideoRecord&, const VideoRecord&) = default;
};

using GroundTruthRecord = VideoRecord;
using AnnotationRecord = VideoRecord;

// A record field failed validation. `path` locates the offending field, for
// example "objects[0].keyframes[2].box"; `line` is 1-based when the record
// came from a file and 0 otherwise.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& message,
              std::size_t line = 0);

  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string path_;
  std::string detail_;
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json RecordToJson(const VideoRecord& record);

// Validates and converts. `path` prefixes every reported field path.
VideoRecord RecordFromJson(const nlohmann::json& json,
                           const std::string& path = "");

nlohmann::json DescriptorToJson(const MotionDescriptor& descriptor);
MotionDescriptor DescriptorFromJson(const nlohmann::json& json,
                                    const std::string& path);
nlohmann::json BoxToJson(const Box& box);
Box BoxFromJson(const nlohmann::json& json, const std::string& path);

struct SkippedLine {
  std::size_t line = 0;
  std::string message;
};

// Streams records from line-delimited JSON. Blank lines are ignored.
// Malformed lines throw SchemaError, or are skipped and remembered when
// `permissive` is set.
class RecordReader {
 public:
  RecordReader(std::istream& in, bool permissive);

  std::optional<VideoRecord> Next();

  const std::vector<SkippedLine>& skipped() const { return skipped_; }

 private:
  std::istream& in_;
  bool permissive_;
  std::size_t line_ = 0;
  std::vector<SkippedLine> skipped_;
};

std::vector<VideoRecord> ReadRecords(const std::string& path,
                                     bool permissive = false,
                                     std::vector<SkippedLine>* skipped = nullptr);

void WriteRecord(std::ostream& out, const VideoRecord& record);
void WriteRecords(const std::string& path, std::span<const VideoRecord> records);

}  // namespace stt

#endif  // STT_RECORDS_H_

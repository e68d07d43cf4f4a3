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

#include "stt/records.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <utility>

namespace stt {
namespace {

using nlohmann::json;

std::string Join(const std::string& path, std::string_view field) {
  if (path.empty()) return std::string(field);
  return path + "." + std::string(field);
}

std::string Index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const json& Require(const json& object, std::string_view field,
                    const std::string& path) {
  const auto it = object.find(field);
  if (it == object.end()) {
    throw SchemaError(Join(path, field), "missing required field");
  }
  return *it;
}

std::string RequireString(const json& object, std::string_view field,
                          const std::string& path) {
  const json& value = Require(object, field, path);
  if (!value.is_string()) {
    throw SchemaError(Join(path, field), "expected a string");
  }
  return value.get<std::string>();
}

double RequireNumber(const json& value, const std::string& path) {
  if (!value.is_number()) throw SchemaError(path, "expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw SchemaError(path, "expected a finite number");
  return v;
}

const json* Optional(const json& object, std::string_view field) {
  const auto it = object.find(field);
  if (it == object.end() || it->is_null()) return nullptr;
  return &*it;
}

}  // namespace

std::string_view ToString(AnswerKind kind) {
  return kind == AnswerKind::kMcq ? "mcq" : "freeform";
}

SchemaError::SchemaError(std::string path, const std::string& message,
                         std::size_t line)
    : std::runtime_error(
          (line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
          (path.empty() ? std::string("record") : path) + ": " + message),
      path_(std::move(path)),
      detail_(message),
      line_(line) {}

json BoxToJson(const Box& box) {
  return json::array({box.x1, box.y1, box.x2, box.y2});
}

Box BoxFromJson(const json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 4) {
    throw SchemaError(path, "box must be an array of 4 numbers");
  }
  const Box box{RequireNumber(value[0], Index(path, 0)),
                RequireNumber(value[1], Index(path, 1)),
                RequireNumber(value[2], Index(path, 2)),
                RequireNumber(value[3], Index(path, 3))};
  if (!IsNormalized(box)) {
    throw SchemaError(path, "box coordinates must lie in [0, 1]");
  }
  if (!HasPositiveArea(box)) {
    throw SchemaError(path, "box must satisfy x1 < x2 and y1 < y2");
  }
  return box;
}

json DescriptorToJson(const MotionDescriptor& d) {
  return json{{"dir", ToString(d.direction)},
              {"speed", ToString(d.speed)},
              {"scale", ToString(d.scale)}};
}

MotionDescriptor DescriptorFromJson(const json& value, const std::string& path) {
  if (!value.is_object()) throw SchemaError(path, "expected an object");
  MotionDescriptor d;
  const std::string dir = RequireString(value, "dir", path);
  const std::string speed = RequireString(value, "speed", path);
  const std::string scale = RequireString(value, "scale", path);
  const auto pd = ParseDirection(dir);
  const auto ps = ParseSpeed(speed);
  const auto pc = ParseScale(scale);
  if (!pd) throw SchemaError(Join(path, "dir"), "unknown direction '" + dir + "'");
  if (!ps) throw SchemaError(Join(path, "speed"), "unknown speed '" + speed + "'");
  if (!pc) throw SchemaError(Join(path, "scale"), "unknown scale '" + scale + "'");
  d = {*pd, *ps, *pc};
  if (!IsStatCoupled(d.direction, d.speed)) {
    throw SchemaError(path, "STAT direction must pair with stationary speed");
  }
  return d;
}

json RecordToJson(const VideoRecord& record) {
  json objects = json::array();
  for (const ObjectAnnotation& object : record.objects) {
    json keyframes = json::array();
    for (const TimedBox& kf : object.keyframes) {
      keyframes.push_back({{"t", kf.timestamp}, {"box", BoxToJson(kf.box)}});
    }
    objects.push_back({{"name", object.name}, {"keyframes", std::move(keyframes)}});
  }
  json out{{"video_id", record.video_id},
           {"duration", record.duration},
           {"question", record.question},
           {"answer_kind", ToString(record.answer_kind)},
           {"gt_answer", record.gt_answer},
           {"objects", std::move(objects)}};
  if (record.descriptors) {
    json descriptors = json::object();
    for (const auto& [name, list] : *record.descriptors) {
      json entries = json::array();
      for (const MotionDescriptor& d : list) entries.push_back(DescriptorToJson(d));
      descriptors[name] = std::move(entries);
    }
    out["descriptors"] = std::move(descriptors);
  }
  if (record.think_trace) out["think_trace"] = *record.think_trace;
  return out;
}

VideoRecord RecordFromJson(const json& value, const std::string& path) {
  if (!value.is_object()) throw SchemaError(path, "record must be an object");
  VideoRecord record;
  record.video_id = RequireString(value, "video_id", path);
  record.duration = RequireNumber(Require(value, "duration", path),
                                  Join(path, "duration"));
  if (!(record.duration > 0.0)) {
    throw SchemaError(Join(path, "duration"), "duration must be positive");
  }
  record.question = RequireString(value, "question", path);
  const std::string kind = RequireString(value, "answer_kind", path);
  if (kind == "mcq") {
    record.answer_kind = AnswerKind::kMcq;
  } else if (kind == "freeform") {
    record.answer_kind = AnswerKind::kFreeform;
  } else {
    throw SchemaError(Join(path, "answer_kind"),
                      "expected \"mcq\" or \"freeform\", got \"" + kind + "\"");
  }
  record.gt_answer = RequireString(value, "gt_answer", path);

  const std::string objects_path = Join(path, "objects");
  const json& objects = Require(value, "objects", path);
  if (!objects.is_array()) throw SchemaError(objects_path, "expected an array");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string object_path = Index(objects_path, i);
    const json& object = objects[i];
    if (!object.is_object()) throw SchemaError(object_path, "expected an object");
    ObjectAnnotation annotation;
    annotation.name = RequireString(object, "name", object_path);
    if (NormalizeObjectName(annotation.name).empty()) {
      throw SchemaError(Join(object_path, "name"), "object name is empty");
    }
    const std::string kf_path = Join(object_path, "keyframes");
    const json& keyframes = Require(object, "keyframes", object_path);
    if (!keyframes.is_array()) throw SchemaError(kf_path, "expected an array");
    for (std::size_t k = 0; k < keyframes.size(); ++k) {
      const std::string at = Index(kf_path, k);
      if (!keyframes[k].is_object()) throw SchemaError(at, "expected an object");
      TimedBox kf;
      kf.timestamp = RequireNumber(Require(keyframes[k], "t", at), Join(at, "t"));
      if (kf.timestamp < 0.0) {
        throw SchemaError(Join(at, "t"), "timestamp must be non-negative");
      }
      kf.box = BoxFromJson(Require(keyframes[k], "box", at), Join(at, "box"));
      if (!annotation.keyframes.empty() &&
          !(kf.timestamp > annotation.keyframes.back().timestamp)) {
        throw SchemaError(Join(at, "t"), "keyframes must be strictly time-ordered");
      }
      annotation.keyframes.push_back(kf);
    }
    record.objects.push_back(std::move(annotation));
  }

  if (const json* descriptors = Optional(value, "descriptors")) {
    const std::string d_path = Join(path, "descriptors");
    if (!descriptors->is_object()) throw SchemaError(d_path, "expected an object");
    DescriptorMap map;
    for (const auto& [name, list] : descriptors->items()) {
      const std::string entry_path = Join(d_path, name);
      if (!list.is_array()) throw SchemaError(entry_path, "expected an array");
      auto& out = map[name];
      for (std::size_t k = 0; k < list.size(); ++k) {
        out.push_back(DescriptorFromJson(list[k], Index(entry_path, k)));
      }
    }
    record.descriptors = std::move(map);
  }
  if (const json* trace = Optional(value, "think_trace")) {
    if (!trace->is_string()) {
      throw SchemaError(Join(path, "think_trace"), "expected a string");
    }
    record.think_trace = trace->get<std::string>();
  }
  return record;
}

RecordReader::RecordReader(std::istream& in, bool permissive)
    : in_(in), permissive_(permissive) {}

std::optional<VideoRecord> RecordReader::Next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json value;
      try {
        value = json::parse(line);
      } catch (const json::parse_error& e) {
        throw SchemaError("", std::string("invalid JSON: ") + e.what());
      }
      return RecordFromJson(value);
    } catch (const SchemaError& e) {
      SchemaError located(e.path(), e.detail(), line_);
      if (!permissive_) throw located;
      skipped_.push_back({line_, located.what()});
    }
  }
  if (in_.bad()) throw IoError("read failure after line " + std::to_string(line_));
  return std::nullopt;
}

std::vector<VideoRecord> ReadRecords(const std::string& path, bool permissive,
                                     std::vector<SkippedLine>* skipped) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  RecordReader reader(in, permissive);
  std::vector<VideoRecord> records;
  while (auto record = reader.Next()) records.push_back(std::move(*record));
  if (skipped != nullptr) *skipped = reader.skipped();
  return records;
}

void WriteRecord(std::ostream& out, const VideoRecord& record) {
  out << RecordToJson(record).dump() << '\n';
}

void WriteRecords(const std::string& path, std::span<const VideoRecord> records) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (const VideoRecord& record : records) WriteRecord(out, record);
  if (!out) throw IoError("write failure on " + path);
}

}  // namespace stt

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

#include "stt/dataset_forge.h"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>

namespace stt {
namespace {

// Inserted points closer than this to the next keyframe are dropped, so that
// accumulated rounding in t_a + k * stride cannot produce a near-duplicate.
constexpr double kTimeEpsilon = 1e-9;

std::optional<Track> DenseTrackOf(const ObjectAnnotation& object,
                                  const DensifyConfig& densify,
                                  std::vector<std::string>* notes) {
  auto note = [&](const std::string& message) {
    if (notes != nullptr) notes->push_back(object.name + ": " + message);
  };
  if (object.keyframes.size() < 2) {
    note("skipped, fewer than two keyframes");
    return std::nullopt;
  }
  try {
    return DensifyTrack(Track(object.name, object.keyframes), densify);
  } catch (const GeometryError& e) {
    note(std::string("skipped, ") + e.what());
    return std::nullopt;
  }
}

std::string MotionTagText(std::string_view object_name,
                          const MotionDescriptor& d) {
  std::string out = "<motion obj=\"";
  out.append(object_name).append("\" dir=\"").append(ToString(d.direction));
  out.append("\" speed=\"").append(ToString(d.speed));
  out.append("\" scale=\"").append(ToString(d.scale)).append("\"/>");
  return out;
}

}  // namespace

void CheckDensifyConfig(const DensifyConfig& config) {
  if (!(config.stride > 0.0 && std::isfinite(config.stride))) {
    throw std::invalid_argument("stride must be positive");
  }
}

Box LerpBox(const TimedBox& a, const TimedBox& b, double t) {
  const double w = (t - a.timestamp) / (b.timestamp - a.timestamp);
  auto mix = [w](double u, double v) { return u + (v - u) * w; };
  return {mix(a.box.x1, b.box.x1), mix(a.box.y1, b.box.y1),
          mix(a.box.x2, b.box.x2), mix(a.box.y2, b.box.y2)};
}

Track DensifyTrack(const Track& sparse, const DensifyConfig& config) {
  switch (config.interpolator) {
    case InterpolatorKind::kLinear:
      return DensifyTrack(sparse, config.stride, LerpBox);
  }
  throw std::invalid_argument("unknown interpolator");
}

Track DensifyTrack(const Track& sparse, double stride,
                   const BoxInterpolator& interpolate) {
  if (sparse.size() < 2) {
    throw GeometryError(GeometryError::Kind::kTrackTooShort,
                        "densification needs at least two keyframes");
  }
  if (!(stride > 0.0 && std::isfinite(stride))) {
    throw std::invalid_argument("stride must be positive");
  }
  const auto samples = sparse.samples();
  std::vector<TimedBox> dense;
  dense.reserve(samples.size());
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const TimedBox& a = samples[i];
    const TimedBox& b = samples[i + 1];
    dense.push_back(a);
    for (std::size_t k = 1;; ++k) {
      const double t = a.timestamp + static_cast<double>(k) * stride;
      if (!(t < b.timestamp - kTimeEpsilon)) break;
      dense.push_back({t, interpolate(a, b, t)});
    }
  }
  dense.push_back(samples.back());
  return Track(sparse.object_name(), std::move(dense));
}

std::map<std::string, MotionDescriptor> ComputeDescriptors(
    const AnnotationRecord& record, const DensifyConfig& densify,
    const MotionConfig& motion, std::vector<std::string>* notes) {
  std::map<std::string, MotionDescriptor> out;
  for (const ObjectAnnotation& object : record.objects) {
    auto dense = DenseTrackOf(object, densify, notes);
    if (!dense) continue;
    try {
      out[object.name] = ComputeMotionDescriptor(*dense, motion);
    } catch (const GeometryError& e) {
      if (notes != nullptr) {
        notes->push_back(object.name + ": skipped, " + e.what());
      }
    }
  }
  return out;
}

std::string InjectMotionTags(
    std::string_view trace_text,
    const std::map<std::string, MotionDescriptor>& descriptors) {
  std::map<std::string, MotionDescriptor> wanted;
  for (const auto& [name, d] : descriptors) {
    if (!IsStatCoupled(d.direction, d.speed)) {
      throw std::invalid_argument("descriptor for '" + name +
                                  "' pairs STAT with a moving speed");
    }
    wanted[NormalizeObjectName(name)] = d;
  }

  std::vector<SourceSpan> spans;
  const Trace trace = ParseTrace(trace_text, &spans);
  const auto& segments = trace.think_segments;

  std::map<std::string, std::size_t> last_mention;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (const auto* item = std::get_if<EvidenceItem>(&segments[i])) {
      std::string key = NormalizeObjectName(item->object_name);
      if (wanted.contains(key)) last_mention[std::move(key)] = i;
    }
  }

  // Splice from the back so earlier offsets stay valid.
  std::string out(trace_text);
  for (auto it = segments.size(); it-- > 0;) {
    const auto* item = std::get_if<EvidenceItem>(&segments[it]);
    if (item == nullptr) continue;
    const std::string key = NormalizeObjectName(item->object_name);
    const auto mention = last_mention.find(key);
    if (mention == last_mention.end() || mention->second != it) continue;
    if (item->object_name.find('"') != std::string::npos) continue;

    std::size_t replace_end = spans[it].end;
    if (it + 1 < segments.size()) {
      const auto* next = std::get_if<MotionTag>(&segments[it + 1]);
      if (next != nullptr && NormalizeObjectName(next->object_name) == key) {
        replace_end = spans[it + 1].end;
      }
    }
    out.replace(spans[it].end, replace_end - spans[it].end,
                MotionTagText(item->object_name, wanted.at(key)));
  }
  return out;
}

AnnotationRecord AugmentRecord(const AnnotationRecord& record,
                               const DensifyConfig& densify,
                               const MotionConfig& motion,
                               std::vector<std::string>* notes) {
  AnnotationRecord out = record;
  if (record.objects.empty()) return out;

  std::map<std::string, MotionDescriptor> computed;
  for (ObjectAnnotation& object : out.objects) {
    auto dense = DenseTrackOf(object, densify, notes);
    if (!dense) continue;
    object.keyframes.assign(dense->samples().begin(), dense->samples().end());
    try {
      computed[object.name] = ComputeMotionDescriptor(*dense, motion);
    } catch (const GeometryError& e) {
      if (notes != nullptr) {
        notes->push_back(object.name + ": no descriptor, " + e.what());
      }
    }
  }

  if (!computed.empty()) {
    DescriptorMap merged = out.descriptors.value_or(DescriptorMap{});
    for (const auto& [name, d] : computed) merged[name] = {d};
    out.descriptors = std::move(merged);
  }
  if (out.think_trace) {
    try {
      out.think_trace = InjectMotionTags(*out.think_trace, computed);
    } catch (const ParseError& e) {
      if (notes != nullptr) {
        notes->push_back(std::string("think_trace left untouched: ") + e.what());
      }
    }
  }
  return out;
}

}  // namespace stt

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

#ifndef STT_DATASET_FORGE_H_
#define STT_DATASET_FORGE_H_

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "stt/records.h"
#include "stt/track_geometry.h"

namespace stt {

enum class InterpolatorKind { kLinear };

struct DensifyConfig {
  double stride = 0.5;  // seconds
  InterpolatorKind interpolator = InterpolatorKind::kLinear;

  friend bool operator==(const DensifyConfig&, const DensifyConfig&) = default;
};

// Throws std::invalid_argument unless stride > 0.
void CheckDensifyConfig(const DensifyConfig& config);

// Produces the box at time t, with a.timestamp < t < b.timestamp. Lets dense
// sources (for example mask-derived boxes) replace corner interpolation.
using BoxInterpolator =
    std::function<Box(const TimedBox& a, const TimedBox& b, double t)>;

Box LerpBox(const TimedBox& a, const TimedBox& b, double t);

// Keeps every original sample and inserts t_a + k * stride (k >= 1) inside
// each gap (t_a, t_b). Throws GeometryError(kTrackTooShort) below two samples.
Track DensifyTrack(const Track& sparse, const DensifyConfig& config);
Track DensifyTrack(const Track& sparse, double stride,
                   const BoxInterpolator& interpolate);

// Whole-track descriptor of every object with at least two keyframes, keyed
// by the object's name in the record. Objects that cannot be described are
// skipped and, when `notes` is given, explained there.
std::map<std::string, MotionDescriptor> ComputeDescriptors(
    const AnnotationRecord& record, const DensifyConfig& densify,
    const MotionConfig& motion, std::vector<std::string>* notes = nullptr);

// Inserts a canonical <motion/> tag right after the last evidence item of
// every described object. A tag already sitting in that slot for the same
// object is replaced, so injection is idempotent. The rest of the text is
// preserved byte for byte. Throws ParseError when `trace_text` does not parse
// and std::invalid_argument for a descriptor that breaks STAT coupling.
std::string InjectMotionTags(
    std::string_view trace_text,
    const std::map<std::string, MotionDescriptor>& descriptors);

// Densifies keyframes, stores whole-track descriptors and tags the think
// trace when present. Problems are reported through `notes`, never thrown.
AnnotationRecord AugmentRecord(const AnnotationRecord& record,
                               const DensifyConfig& densify,
                               const MotionConfig& motion,
                               std::vector<std::string>* notes = nullptr);

}  // namespace stt

#endif  // STT_DATASET_FORGE_H_

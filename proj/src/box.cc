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

#include "stt/box.h"

#include <algorithm>
#include <cmath>

namespace stt {
namespace {

bool InUnit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

double ClampedArea(const Box& b) {
  return std::max(0.0, b.x2 - b.x1) * std::max(0.0, b.y2 - b.y1);
}

}  // namespace

bool IsNormalized(const Box& box) {
  return InUnit(box.x1) && InUnit(box.y1) && InUnit(box.x2) && InUnit(box.y2);
}

bool HasPositiveArea(const Box& box) {
  return box.x1 < box.x2 && box.y1 < box.y2;
}

double Iou(const Box& a, const Box& b) {
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  const double inter = (iw > 0.0 && ih > 0.0) ? iw * ih : 0.0;
  const double uni = ClampedArea(a) + ClampedArea(b) - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace stt

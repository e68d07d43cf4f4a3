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

#ifndef STT_BOX_H_
#define STT_BOX_H_

namespace stt {

// Axis-aligned rectangle in normalized image coordinates. x grows rightward,
// y grows downward. A Box is a plain value: parsed boxes may violate the
// normalization or non-degeneracy invariants, which callers check with
// IsValidBox before doing geometry on them.
struct Box {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  friend bool operator==(const Box&, const Box&) = default;
};

// Every coordinate lies in [0, 1].
bool IsNormalized(const Box& box);

// x1 < x2 and y1 < y2.
bool HasPositiveArea(const Box& box);

inline bool IsValidBox(const Box& box) {
  return IsNormalized(box) && HasPositiveArea(box);
}

// Intersection over union. Reversed or degenerate boxes contribute zero area;
// the result is always in [0, 1], and 0 when the union is empty.
double Iou(const Box& a, const Box& b);

}  // namespace stt

#endif  // STT_BOX_H_

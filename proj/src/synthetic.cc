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

#include "stt/synthetic.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace stt {
namespace {

// Compass-up unit vectors of the sector boundaries at 22.5 + 45k degrees,
// k = 0..7. Sector k (centered on 45k degrees) lies between boundary k-1
// (inclusive) and boundary k (exclusive).
constexpr double kC = 0.92387953251128674;  // cos 22.5
constexpr double kS = 0.38268343236508978;  // sin 22.5
constexpr std::array<std::array<double, 2>, 8> kBoundary = {{
    {kC, kS},    // 22.5
    {kS, kC},    // 67.5
    {-kS, kC},   // 112.5
    {-kC, kS},   // 157.5
    {-kC, -kS},  // 202.5
    {-kS, -kC},  // 247.5
    {kS, -kC},   // 292.5
    {kC, -kS},   // 337.5
}};
constexpr std::array<Direction, 8> kSectorBin = {
    Direction::kE, Direction::kNE, Direction::kN, Direction::kNW,
    Direction::kW, Direction::kSW, Direction::kS, Direction::kSE};

double Cross(const std::array<double, 2>& a, double x, double y) {
  return a[0] * y - a[1] * x;
}

Direction SectorOf(double up_x, double up_y) {
  for (int k = 0; k < 8; ++k) {
    const auto& lo = kBoundary[(k + 7) % 8];
    const auto& hi = kBoundary[k];
    if (Cross(lo, up_x, up_y) >= 0.0 && Cross(hi, up_x, up_y) < 0.0) {
      return kSectorBin[k];
    }
  }
  return Direction::kE;  // unreachable for non-zero vectors
}

struct Range {
  double lo;
  double hi;
};

Range SpeedRange(Speed target, const MotionConfig& c, double m) {
  switch (target) {
    case Speed::kStationary:
      return {0.0, 0.0};
    case Speed::kSlow:
      return {c.stationary_speed_threshold * (1 + m),
              c.slow_moderate_threshold * (1 - m)};
    case Speed::kModerate:
      return {c.slow_moderate_threshold * (1 + m),
              c.moderate_fast_threshold * (1 - m)};
    case Speed::kFast:
      return {c.moderate_fast_threshold * (1 + m),
              std::max(3.0 * c.moderate_fast_threshold,
                       1.5 * c.moderate_fast_threshold * (1 + m))};
  }
  return {0.0, 0.0};
}

Range LogRatioRange(Scale target, const MotionConfig& c, double m) {
  const double cut = c.scale_stable_log_threshold;
  const double outer = std::max(std::log(3.0), 1.5 * cut * (1 + m));
  switch (target) {
    case Scale::kStable:
      return {-cut * std::max(0.0, 1 - m), cut * std::max(0.0, 1 - m)};
    case Scale::kApproaching:
      return {cut * (1 + m), outer};
    case Scale::kReceding:
      return {-outer, -cut * (1 + m)};
  }
  return {0.0, 0.0};
}

void CheckSpec(const SyntheticSpec& spec) {
  if (spec.sample_count < 2) throw InfeasibleSpec("sample_count must be >= 2");
  if (!(spec.margin >= 0.0) || !std::isfinite(spec.margin)) {
    throw InfeasibleSpec("margin must be a finite non-negative fraction");
  }
  if (!IsStatCoupled(spec.target_direction, spec.target_speed)) {
    throw InfeasibleSpec("STAT direction and stationary speed must go together");
  }
  const bool moving = spec.target_speed != Speed::kStationary;
  switch (spec.motion_kind) {
    case MotionKind::kStationary:
      if (moving || spec.target_scale != Scale::kStable) {
        throw InfeasibleSpec("stationary kind requires (STAT, stationary, stable)");
      }
      break;
    case MotionKind::kApproach:
      if (spec.target_scale != Scale::kApproaching) {
        throw InfeasibleSpec("approach kind requires an approaching scale");
      }
      break;
    case MotionKind::kRecede:
      if (spec.target_scale != Scale::kReceding) {
        throw InfeasibleSpec("recede kind requires a receding scale");
      }
      break;
    case MotionKind::kLinear:
    case MotionKind::kArc:
      if (!moving) throw InfeasibleSpec("linear and arc kinds must move");
      break;
  }
}

}  // namespace

OracleReading OracleClassify(const Track& track, const MotionConfig& config) {
  const auto s = track.samples();
  if (s.size() < 2) {
    throw GeometryError(GeometryError::Kind::kTrackTooShort,
                        "oracle needs two samples");
  }
  double path = 0.0;
  double diagonals = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double w = s[i].box.x2 - s[i].box.x1;
    const double h = s[i].box.y2 - s[i].box.y1;
    diagonals += std::sqrt(w * w + h * h);
    if (i > 0) {
      const double dx = 0.5 * (s[i].box.x1 + s[i].box.x2) -
                        0.5 * (s[i - 1].box.x1 + s[i - 1].box.x2);
      const double dy = 0.5 * (s[i].box.y1 + s[i].box.y2) -
                        0.5 * (s[i - 1].box.y1 + s[i - 1].box.y2);
      path += std::sqrt(dx * dx + dy * dy);
    }
  }
  OracleReading out;
  const double elapsed = s.back().timestamp - s.front().timestamp;
  out.speed = path / elapsed / (diagonals / static_cast<double>(s.size()));

  if (out.speed < config.stationary_speed_threshold) {
    out.descriptor.speed = Speed::kStationary;
  } else if (out.speed < config.slow_moderate_threshold) {
    out.descriptor.speed = Speed::kSlow;
  } else if (out.speed < config.moderate_fast_threshold) {
    out.descriptor.speed = Speed::kModerate;
  } else {
    out.descriptor.speed = Speed::kFast;
  }

  if (out.descriptor.speed == Speed::kStationary) {
    out.descriptor.direction = Direction::kStat;
  } else {
    const double dx = 0.5 * (s.back().box.x1 + s.back().box.x2) -
                      0.5 * (s.front().box.x1 + s.front().box.x2);
    const double dy = 0.5 * (s.back().box.y1 + s.back().box.y2) -
                      0.5 * (s.front().box.y1 + s.front().box.y2);
    out.descriptor.direction = SectorOf(dx, -dy);
  }

  const auto area = [](const Box& b) { return (b.x2 - b.x1) * (b.y2 - b.y1); };
  const double ratio = area(s.back().box) / area(s.front().box);
  out.log_ratio = std::log(ratio);
  const double grow = std::exp(config.scale_stable_log_threshold);
  if (ratio > grow) {
    out.descriptor.scale = Scale::kApproaching;
  } else if (ratio < 1.0 / grow) {
    out.descriptor.scale = Scale::kReceding;
  } else {
    out.descriptor.scale = Scale::kStable;
  }
  return out;
}

bool ClearOfThresholds(const OracleReading& reading, const MotionConfig& config,
                       double margin) {
  if (reading.descriptor.speed != Speed::kStationary || reading.speed != 0.0) {
    for (double cut : {config.stationary_speed_threshold,
                       config.slow_moderate_threshold,
                       config.moderate_fast_threshold}) {
      if (std::abs(reading.speed - cut) < margin * cut) return false;
    }
  }
  const double cut = config.scale_stable_log_threshold;
  return std::abs(std::abs(reading.log_ratio) - cut) >= margin * cut;
}

SyntheticTrack GenerateSynthetic(const SyntheticSpec& spec,
                                 const MotionConfig& config) {
  CheckMotionConfig(config);
  CheckSpec(spec);
  const double m = spec.margin;
  const Range speed = SpeedRange(spec.target_speed, config, m);
  const Range log_ratio = LogRatioRange(spec.target_scale, config, m);
  if (speed.lo > speed.hi || log_ratio.lo > log_ratio.hi) {
    throw InfeasibleSpec("margin leaves the target bin empty");
  }
  const bool moving = spec.target_speed != Speed::kStationary;
  const std::size_t n = static_cast<std::size_t>(spec.sample_count);
  const MotionDescriptor target{spec.target_direction, spec.target_speed,
                                spec.target_scale};

  std::mt19937_64 rng(spec.seed);
  auto uniform = [&rng](double lo, double hi) {
    return lo == hi ? lo : std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  for (int attempt = 0; attempt < 256; ++attempt) {
    const double v = uniform(speed.lo, speed.hi);
    const double r = spec.motion_kind == MotionKind::kStationary
                         ? 0.0
                         : uniform(log_ratio.lo, log_ratio.hi);

    // Progress along the path, 0 at the first sample and 1 at the last.
    std::vector<double> progress(n);
    for (std::size_t i = 0; i < n; ++i) {
      progress[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    }
    if (spec.motion_kind == MotionKind::kArc && n > 2) {
      for (std::size_t i = 1; i + 1 < n; ++i) progress[i] = uniform(0.0, 1.0);
      std::sort(progress.begin(), progress.end());
      bool spaced = true;
      for (std::size_t i = 1; i < n; ++i) {
        spaced = spaced && progress[i] - progress[i - 1] > 1e-3;
      }
      if (!spaced) continue;
    }

    // Box sizes: sides grow linearly with progress up to sqrt(e^r).
    const double diag0 = uniform(0.05, 0.15);
    const double tilt = uniform(0.35, 1.22);  // ~20..70 degrees
    const double w0 = diag0 * std::cos(tilt);
    const double h0 = diag0 * std::sin(tilt);
    const double side_growth = std::exp(r / 2.0);
    std::vector<double> side(n);
    double mean_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      side[i] = 1.0 + (side_growth - 1.0) * progress[i];
      mean_diag += diag0 * side[i];
    }
    mean_diag /= static_cast<double>(n);

    // Centroid offsets for a unit chord, then scaled to the path length.
    std::vector<Vec2> offset(n);
    double duration = uniform(0.5, 5.0);
    if (moving) {
      const double center = 45.0 * CompassIndex(spec.target_direction);
      const double spread = 22.5 * std::max(0.0, 1.0 - m);
      const double heading =
          (center + uniform(-spread, spread)) * 3.14159265358979323846 / 180.0;
      const double ux = std::cos(heading);
      const double uy = -std::sin(heading);  // image y grows downward
      const double bulge = spec.motion_kind == MotionKind::kArc
                               ? uniform(0.1, 0.3) * (uniform(0, 1) < 0.5 ? -1 : 1)
                               : 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double f = progress[i];
        const double lateral = bulge * 4.0 * f * (1.0 - f);
        offset[i] = {f * ux - lateral * uy, f * uy + lateral * ux};
      }
      double unit_path = 0.0;
      for (std::size_t i = 1; i < n; ++i) {
        unit_path += std::hypot(offset[i].x - offset[i - 1].x,
                                offset[i].y - offset[i - 1].y);
      }
      const double path = uniform(0.05, 0.3);
      for (Vec2& o : offset) {
        o.x *= path / unit_path;
        o.y *= path / unit_path;
      }
      duration = path / (v * mean_diag);
    }

    double min_x = 0, max_x = 0, min_y = 0, max_y = 0, half_w = 0, half_h = 0;
    for (std::size_t i = 0; i < n; ++i) {
      min_x = std::min(min_x, offset[i].x);
      max_x = std::max(max_x, offset[i].x);
      min_y = std::min(min_y, offset[i].y);
      max_y = std::max(max_y, offset[i].y);
      half_w = std::max(half_w, w0 * side[i] / 2.0);
      half_h = std::max(half_h, h0 * side[i] / 2.0);
    }
    const double lo_x = half_w - min_x, hi_x = 1.0 - half_w - max_x;
    const double lo_y = half_h - min_y, hi_y = 1.0 - half_h - max_y;
    if (lo_x >= hi_x || lo_y >= hi_y) continue;
    const double cx = uniform(lo_x, hi_x);
    const double cy = uniform(lo_y, hi_y);
    const double t0 = uniform(0.0, 10.0);

    std::vector<TimedBox> samples(n);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const double hw = w0 * side[i] / 2.0;
      const double hh = h0 * side[i] / 2.0;
      const double x = cx + offset[i].x;
      const double y = cy + offset[i].y;
      samples[i] = {t0 + duration * progress[i], {x - hw, y - hh, x + hw, y + hh}};
      ok = IsValidBox(samples[i].box) &&
           (i == 0 || samples[i].timestamp > samples[i - 1].timestamp);
    }
    if (!ok) continue;

    Track track("synthetic", std::move(samples));
    const OracleReading reading = OracleClassify(track, config);
    if (reading.descriptor == target && ClearOfThresholds(reading, config, m)) {
      return {std::move(track), target};
    }
  }
  throw InfeasibleSpec("no track satisfying the spec was found");
}

}  // namespace stt

/******************************************************************************
 * Copyright 2026 The Autotune Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include "autotune/features.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace autotune {

namespace {

constexpr double kTimeMatchTolerance = 1e-9;

int TimeIndexOf(const Scenario& scenario, double t) {
  for (int k = 0; k < kNumTimePoints; ++k) {
    if (std::abs(scenario.time_grid[static_cast<size_t>(k)] - t) <= kTimeMatchTolerance) {
      return k;
    }
  }
  throw ContractError("trajectory point time is not on the scenario time grid");
}

double DistanceToInterval(double s, double lo, double hi) {
  if (s < lo) return lo - s;
  if (s > hi) return s - hi;
  return 0.0;
}

// Nearest obstacle of one kind that is still (partly) ahead of the ego
// station at time index k: smallest non-negative rear gap wins.
struct AheadHit {
  bool found = false;
  double distance = kDistanceSentinel;
  double speed = 0.0;
  double lateral_gap = 0.0;
};

AheadHit NearestAhead(const Scenario& scenario, ObstacleKind kind, int k, double s) {
  AheadHit hit;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& ob : scenario.obstacles) {
    if (ob.kind != kind) continue;
    double rear, front, speed;
    if (ob.TimeInvariant()) {
      rear = front = ob.station;
      speed = 0.0;
    } else {
      const auto& slice = ob.slices[static_cast<size_t>(k)];
      if (!slice.has_value()) continue;
      rear = slice->s_rear;
      front = slice->s_front;
      speed = slice->speed;
    }
    if (front < s) continue;  // fully passed
    double gap = std::max(0.0, rear - s);
    if (gap < best) {
      best = gap;
      hit.found = true;
      hit.distance = std::min(gap, kDistanceSentinel);
      hit.speed = speed;
      hit.lateral_gap = ob.lateral_gap;
    }
  }
  return hit;
}

}  // namespace

OccupancyMap ProjectObstacles(const Scenario& scenario) {
  OccupancyMap map;
  for (const auto& ob : scenario.obstacles) {
    switch (ob.kind) {
      case ObstacleKind::kStop:
      case ObstacleKind::kVirtual:
        for (int k = 0; k < kNumTimePoints; ++k) {
          map[static_cast<size_t>(k)].push_back(
              {ob.kind, ob.station, std::numeric_limits<double>::infinity(), 0.0});
        }
        break;
      case ObstacleKind::kFollow:
      case ObstacleKind::kOvertake:
        for (int k = 0; k < kNumTimePoints; ++k) {
          const auto& slice = ob.slices[static_cast<size_t>(k)];
          if (!slice.has_value()) continue;
          map[static_cast<size_t>(k)].push_back(
              {ob.kind, slice->s_rear, slice->s_front, slice->speed});
        }
        break;
      case ObstacleKind::kNudge:
        // Laterally offset from the path; does not block the ST graph.
        break;
    }
  }
  return map;
}

double CollisionDistance(const Scenario& scenario, const OccupancyMap& occupancy,
                         double t, double s, double st_time_scale) {
  double best = kDistanceSentinel;
  for (int k = 0; k < kNumTimePoints; ++k) {
    const auto& slices = occupancy[static_cast<size_t>(k)];
    if (slices.empty()) continue;
    double dt_m = (t - scenario.time_grid[static_cast<size_t>(k)]) * st_time_scale;
    if (std::abs(dt_m) >= best) continue;
    for (const auto& slice : slices) {
      double ds = DistanceToInterval(s, slice.s_lo, slice.s_hi);
      double d = std::hypot(ds, dt_m);
      if (d < best) best = d;
    }
  }
  return best;
}

bool PointCollides(const OccupancyMap& occupancy, int time_index, double s) {
  for (const auto& slice : occupancy[static_cast<size_t>(time_index)]) {
    if (s >= slice.s_lo && s <= slice.s_hi) return true;
  }
  return false;
}

FeatureVector ExtractFeatures(const Scenario& scenario,
                              const OccupancyMap& occupancy,
                              const TrajectoryPoint& point) {
  for (double x : {point.t, point.s, point.v, point.a, point.j}) {
    if (!std::isfinite(x)) throw ContractError("trajectory point must be finite");
  }
  int k = TimeIndexOf(scenario, point.t);
  const PathProfile& path = scenario.path;

  FeatureVector f{};
  f[kChLatOffset] = path.LateralAt(point.s);
  f[kChLatOffsetD] = path.LateralDAt(point.s);
  f[kChLatOffsetDD] = path.LateralDDAt(point.s);
  f[kChCurvature] = path.CurvatureAt(point.s);
  f[kChStation] = point.s;
  f[kChTime] = point.t;
  f[kChVelocity] = point.v;
  f[kChSpeedLimit] = path.SpeedLimitAt(point.s);
  f[kChAccel] = point.a;
  f[kChJerk] = point.j;
  f[kChCollisionDist] = CollisionDistance(scenario, occupancy, point.t, point.s);

  AheadHit follow = NearestAhead(scenario, ObstacleKind::kFollow, k, point.s);
  f[kChFollowDist] = follow.distance;
  f[kChFollowSpeed] = follow.found ? follow.speed : 0.0;

  AheadHit overtake = NearestAhead(scenario, ObstacleKind::kOvertake, k, point.s);
  f[kChOvertakeDist] = overtake.distance;
  f[kChOvertakeSpeed] = overtake.found ? overtake.speed : 0.0;

  f[kChStopDist] = NearestAhead(scenario, ObstacleKind::kStop, k, point.s).distance;
  f[kChVirtualDist] = NearestAhead(scenario, ObstacleKind::kVirtual, k, point.s).distance;

  AheadHit nudge = NearestAhead(scenario, ObstacleKind::kNudge, k, point.s);
  f[kChNudgeLateral] = nudge.found ? nudge.lateral_gap : kDistanceSentinel;
  f[kChNudgeSpeed] = nudge.found ? nudge.speed : 0.0;

  double kappa = f[kChCurvature];
  f[kChLatAccel] = kappa * point.v * point.v;
  // d(kappa v^2)/dt = kappa' v^3 + 2 kappa v a, with kappa' taken from the
  // interpolant segment at s.
  f[kChLatJerk] = path.CurvatureSlopeAt(point.s) * point.v * point.v * point.v +
                  2.0 * kappa * point.v * point.a;
  return f;
}

FeatureBlock ExtractBlock(const Scenario& scenario, const OccupancyMap& occupancy,
                          const Trajectory& trajectory) {
  if (static_cast<int>(trajectory.points.size()) != kNumTimePoints) {
    throw ContractError("trajectory must hold exactly 18 points");
  }
  FeatureBlock block;
  for (int k = 0; k < kNumTimePoints; ++k) {
    block[k] = ExtractFeatures(scenario, occupancy, trajectory.points[static_cast<size_t>(k)]);
  }
  return block;
}

NormTable NormTable::Identity() {
  NormTable t;
  t.center.fill(0.0);
  t.scale.fill(1.0);
  return t;
}

NormTable NormTable::Default() {
  NormTable t;
  t.center.fill(0.0);
  t.scale.fill(1.0);
  t.center[kChLatOffset] = 0.0;    t.scale[kChLatOffset] = 1.0;
  t.center[kChLatOffsetD] = 0.0;   t.scale[kChLatOffsetD] = 0.5;
  t.center[kChLatOffsetDD] = 0.0;  t.scale[kChLatOffsetDD] = 0.25;
  t.center[kChCurvature] = 0.0;    t.scale[kChCurvature] = 0.05;
  t.center[kChStation] = 50.0;     t.scale[kChStation] = 50.0;
  t.center[kChTime] = 4.25;        t.scale[kChTime] = 4.25;
  t.center[kChVelocity] = 7.5;     t.scale[kChVelocity] = 7.5;
  t.center[kChSpeedLimit] = 10.0;  t.scale[kChSpeedLimit] = 5.0;
  t.center[kChAccel] = 0.0;        t.scale[kChAccel] = 2.0;
  t.center[kChJerk] = 0.0;         t.scale[kChJerk] = 3.0;
  t.center[kChCollisionDist] = 0.0; t.scale[kChCollisionDist] = 50.0;
  t.center[kChFollowDist] = 0.0;   t.scale[kChFollowDist] = 50.0;
  t.center[kChFollowSpeed] = 0.0;  t.scale[kChFollowSpeed] = 5.0;
  t.center[kChOvertakeDist] = 0.0; t.scale[kChOvertakeDist] = 50.0;
  t.center[kChOvertakeSpeed] = 0.0; t.scale[kChOvertakeSpeed] = 5.0;
  t.center[kChStopDist] = 0.0;     t.scale[kChStopDist] = 50.0;
  t.center[kChVirtualDist] = 0.0;  t.scale[kChVirtualDist] = 50.0;
  t.center[kChNudgeLateral] = 0.0; t.scale[kChNudgeLateral] = 50.0;
  t.center[kChNudgeSpeed] = 0.0;   t.scale[kChNudgeSpeed] = 5.0;
  t.center[kChLatAccel] = 0.0;     t.scale[kChLatAccel] = 2.0;
  t.center[kChLatJerk] = 0.0;      t.scale[kChLatJerk] = 3.0;
  return t;
}

void NormTable::Validate() const {
  for (int i = 0; i < kNumFeatures; ++i) {
    if (!std::isfinite(center[static_cast<size_t>(i)])) {
      throw ContractError("normalization center must be finite");
    }
    if (!(scale[static_cast<size_t>(i)] > 0.0) ||
        !std::isfinite(scale[static_cast<size_t>(i)])) {
      throw ContractError("normalization scale must be positive and finite");
    }
  }
}

FeatureVector NormalizeFeatures(const FeatureVector& raw, const NormTable& table) {
  table.Validate();
  FeatureVector out{};
  for (int i = 0; i < kNumFeatures; ++i) {
    size_t u = static_cast<size_t>(i);
    out[u] = (raw[u] - table.center[u]) / table.scale[u];
  }
  return out;
}

FeatureBlock NormalizeBlock(const FeatureBlock& raw, const NormTable& table) {
  table.Validate();
  FeatureBlock out;
  for (int k = 0; k < kNumTimePoints; ++k) {
    for (int i = 0; i < kNumFeatures; ++i) {
      size_t u = static_cast<size_t>(i);
      out[k][u] = (raw[k][u] - table.center[u]) / table.scale[u];
    }
  }
  return out;
}

nlohmann::json ToJson(const NormTable& table) {
  return nlohmann::json{
      {"center", std::vector<double>(table.center.begin(), table.center.end())},
      {"scale", std::vector<double>(table.scale.begin(), table.scale.end())}};
}

NormTable NormTableFromJson(const nlohmann::json& j) {
  NormTable t;
  try {
    auto center = j.at("center").get<std::vector<double>>();
    auto scale = j.at("scale").get<std::vector<double>>();
    if (center.size() != kNumFeatures || scale.size() != kNumFeatures) {
      throw ParseError("normalization table must hold 21 channels");
    }
    std::copy(center.begin(), center.end(), t.center.begin());
    std::copy(scale.begin(), scale.end(), t.scale.begin());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad normalization table: ") + e.what());
  }
  t.Validate();
  return t;
}

}  // namespace autotune

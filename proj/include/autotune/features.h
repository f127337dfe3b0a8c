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

#pragma once

#include <array>
#include <vector>

#include "autotune/scenario.h"

namespace autotune {

// Absent-obstacle sentinel: distance channels clip here, speed channels
// read 0. Bounded inputs keep the reward encoder well conditioned.
inline constexpr double kDistanceSentinel = 200.0;

// Station-time distances are measured with time scaled to meters so the
// two axes are commensurable: 1 s == 10 m by default.
inline constexpr double kStTimeScaleMps = 10.0;

// One blocked station interval at one evaluation time. Stop/Virtual
// obstacles block the half-line beyond their station (s_hi = +inf).
struct OccSlice {
  ObstacleKind kind = ObstacleKind::kStop;
  double s_lo = 0.0;
  double s_hi = 0.0;
  double speed = 0.0;
};

// Blocked intervals per evaluation time index. Nudge obstacles are
// laterally clear of the ego path and therefore contribute no blocked
// interval; they only feed the nudge feature channels.
using OccupancyMap = std::array<std::vector<OccSlice>, kNumTimePoints>;

OccupancyMap ProjectObstacles(const Scenario& scenario);

// Minimum distance from (t, s) to any blocked region, in the scaled
// station-time metric, clipped to [0, kDistanceSentinel]. Exactly 0 iff
// the point lies inside a blocked interval at some evaluation time.
double CollisionDistance(const Scenario& scenario, const OccupancyMap& occupancy,
                         double t, double s,
                         double st_time_scale = kStTimeScaleMps);

// True iff the point's station is inside a blocked interval at its own
// grid time. Equivalent to CollisionDistance(...) == 0 for on-grid points.
bool PointCollides(const OccupancyMap& occupancy, int time_index, double s);

// The 21 raw (un-normalized) features at one trajectory point. The point
// must lie on the scenario time grid. Deterministic: identical inputs
// produce bit-identical outputs.
FeatureVector ExtractFeatures(const Scenario& scenario,
                              const OccupancyMap& occupancy,
                              const TrajectoryPoint& point);

FeatureBlock ExtractBlock(const Scenario& scenario, const OccupancyMap& occupancy,
                          const Trajectory& trajectory);

// Per-channel affine normalization. scale > 0 on every channel.
struct NormTable {
  std::array<double, kNumFeatures> center{};
  std::array<double, kNumFeatures> scale{};

  static NormTable Identity();
  // Hand-picked physical scales that keep every channel within a few
  // units on desk-scale scenarios. Travels with trained models.
  static NormTable Default();

  void Validate() const;
  bool operator==(const NormTable&) const = default;
};

FeatureVector NormalizeFeatures(const FeatureVector& raw, const NormTable& table);
FeatureBlock NormalizeBlock(const FeatureBlock& raw, const NormTable& table);

nlohmann::json ToJson(const NormTable& table);
NormTable NormTableFromJson(const nlohmann::json& j);

}  // namespace autotune

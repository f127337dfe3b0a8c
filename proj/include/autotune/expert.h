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

#include <json.hpp>

#include "autotune/features.h"
#include "autotune/scenario.h"

namespace autotune {

// Hand-specified scoring rule that stands in for the human expert: linear
// weights over normalized features, a squared speed-limit-violation term,
// a hard collision penalty, and a fixed exponential per-step decay. It is
// hidden from the trainer, and the squared term keeps it outside the
// learned model family, so recovery tests test ranking, not parameter
// identification. Channels that depend on acceleration or jerk carry
// weight zero so the lattice planner below stays exact with a
// (time, station, speed) state.
struct GroundTruthReward {
  std::array<double, kNumFeatures> weights{};
  double speed_violation_weight = 2.0;   // per (m/s)^2 over the limit
  double accel_smooth_weight = 0.0;      // per m/s^2 of |a|; > 0 trades
                                         // expert progress for smoothness
  double collision_penalty = 1e6;        // per colliding point
  double decay = 0.95;                   // per time index, in (0, 1]
  NormTable norm = NormTable::Default();

  static GroundTruthReward Default();
  void Validate() const;

  // Per-point reward over raw (un-normalized) features.
  double Reward(const FeatureVector& raw) const;
  // Sum over rows of decay^k * Reward(row k).
  double Value(const FeatureBlock& raw_block) const;
};

nlohmann::json ToJson(const GroundTruthReward& gt);
GroundTruthReward GroundTruthRewardFromJson(const nlohmann::json& j);

// Speed lattice used by the synthetic expert and by test snapping.
struct DpResolution {
  double speed_step = 0.5;        // m/s
  double max_speed_factor = 1.25; // cap = factor * max speed limit

  void Validate() const;
};

// Maximizes the ground-truth value over a dense station x speed lattice:
// speed nodes per time step, acceleration-bounded transitions (trapezoid
// station integration), colliding transitions forbidden. Requires a
// uniform time grid. Throws ContractError when every lattice path
// collides (over-constrained scenario).
Trajectory SyntheticExpert(const Scenario& scenario, const GroundTruthReward& gt,
                           const DpResolution& resolution,
                           double a_min = -4.0, double a_max = 2.0);

// Projects a trajectory onto the lattice the expert searched: speeds snap
// to the nearest node reachable under the accel bounds, stations are
// re-integrated by the same trapezoid rule. The result is always a path
// the planner could have visited, which makes expert dominance assertable
// sample by sample.
Trajectory SnapToLattice(const Scenario& scenario, const Trajectory& trajectory,
                         const DpResolution& resolution,
                         double a_min = -4.0, double a_max = 2.0);

}  // namespace autotune

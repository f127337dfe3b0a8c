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

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "autotune/scenario.h"

namespace autotune {

// Candidate speed profiles are drawn as piecewise-constant accelerations
// over the horizon and integrated exactly, with speed clamped at zero.
// The same generator serves offline training queries and online selection.
struct SamplerConfig {
  int n_samples = 100;
  double a_min = -4.0;      // m/s^2, < 0
  double a_max = 2.0;       // m/s^2, > 0
  double jerk_limit = 6.0;  // m/s^3, bounds accel change across pieces
  int pieces = 17;          // piecewise-constant accel segments
  double hold_speed_prob = 0.3;  // chance a piece is an exact hold-speed
                                 // primitive (a = 0)
  uint64_t seed = 0;

  void Validate() const;
};

nlohmann::json ToJson(const SamplerConfig& config);
SamplerConfig SamplerConfigFromJson(const nlohmann::json& j);

// Draws config.n_samples trajectories for the scenario. Deterministic in
// (scenario.seed, config.seed); infeasible draws are clamped, never
// rejected, so the sample count is exact and the candidate distribution
// does not depend on the scenario.
std::vector<Trajectory> SampleTrajectories(const Scenario& scenario,
                                           const SamplerConfig& config);

}  // namespace autotune

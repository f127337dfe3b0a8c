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
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "autotune/scenario.h"

namespace autotune {

// Scenario families realizable on the station-time graph. Counts select
// how many of each the suite holds.
//   cruise   - free road, possibly under curvature
//   stop     - stop line 20..120 m ahead (a fraction uses a virtual
//              destination obstacle instead, same blocking semantics)
//   follow   - slower lead vehicle ahead
//   yield    - crossing obstacle blocks an interval until it clears
//   overtake - crossing obstacle arrives later; passing early stays clear
//   nudge    - laterally offset obstacle, path not blocked
struct SuiteConfig {
  std::map<std::string, int> counts;

  double dt = 0.5;              // evaluation grid spacing (s)
  double path_length = 220.0;   // m
  double path_knot_spacing = 10.0;
  double v0_min = 3.0, v0_max = 12.0;
  double vlim_min = 8.0, vlim_max = 15.0;
  double curvature_max = 0.03;      // 1/m
  double lateral_amp_max = 0.3;     // m, sinusoidal lane offset amplitude
  double stop_min = 20.0, stop_max = 120.0;
  double s0_spread = 0.0;           // initial stations drawn from [0, spread];
                                    // scenario backgrounds shift so pooled
                                    // statistics cannot stand in for
                                    // within-scenario comparisons
  double virtual_fraction = 0.25;   // share of stop scenarios using kVirtual
  double comfort_lat_accel = 3.0;   // m/s^2, caps speed limit in curves
  double brake_headroom = 3.5;      // m/s^2 assumed usable braking for
                                    // feasibility caps on v0

  void Validate() const;  // rejects an empty/zero family list
};

nlohmann::json ToJson(const SuiteConfig& config);
SuiteConfig SuiteConfigFromJson(const nlohmann::json& j);

const std::vector<std::string>& KnownFamilies();

// Deterministic in (config, seed); scenario ids are unique and carry the
// family name. Initial speeds are capped so that a full-brake profile
// always stays clear of blocking obstacles, keeping every scenario
// solvable.
std::vector<Scenario> GenerateScenarioSuite(const SuiteConfig& config, uint64_t seed);

}  // namespace autotune

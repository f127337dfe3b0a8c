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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "autotune/common.h"

namespace autotune {

// Path geometry sampled over station. Queries between grid points use
// linear interpolation; queries beyond either end clamp to the boundary
// value. All types here are immutable after construction and all queries
// are pure, so concurrent evaluation needs no synchronization.
struct PathProfile {
  std::vector<double> station;      // strictly increasing (m)
  std::vector<double> curvature;    // 1/m
  std::vector<double> speed_limit;  // m/s, > 0 everywhere
  std::vector<double> l;            // lateral offset w.r.t. lane center (m)
  std::vector<double> dl;           // dl/ds
  std::vector<double> ddl;          // d2l/ds2

  void Validate() const;  // throws ContractError

  double CurvatureAt(double s) const;
  double SpeedLimitAt(double s) const;
  double LateralAt(double s) const;
  double LateralDAt(double s) const;
  double LateralDDAt(double s) const;
  // Slope of the piecewise-linear curvature interpolant; 0 in the clamped
  // regions, right-continuous at interior knots.
  double CurvatureSlopeAt(double s) const;

  double MaxSpeedLimit() const;
  double EndStation() const { return station.back(); }
};

enum class ObstacleKind { kFollow, kOvertake, kStop, kVirtual, kNudge };

std::string ToString(ObstacleKind kind);
ObstacleKind ObstacleKindFromString(const std::string& s);

// Occupied station interval of a dynamic obstacle at one evaluation time.
struct StSlice {
  double s_rear = 0.0;
  double s_front = 0.0;
  double speed = 0.0;  // obstacle speed at that time (m/s)
};

// Follow/Overtake/Nudge carry one optional slice per evaluation time
// (disengaged times are absent, e.g. a crossing vehicle that has cleared
// the path). Stop/Virtual are time-invariant and carry only `station`.
struct Obstacle {
  ObstacleKind kind = ObstacleKind::kStop;
  double station = 0.0;      // Stop/Virtual only
  double lateral_gap = 0.0;  // Nudge only, signed (m)
  std::vector<std::optional<StSlice>> slices;

  bool TimeInvariant() const {
    return kind == ObstacleKind::kStop || kind == ObstacleKind::kVirtual;
  }
  void Validate(int num_times) const;
};

// One realized planning problem: fixed path, obstacle set, initial
// kinematic state, and the 18-point evaluation time grid.
struct Scenario {
  std::string id;
  uint64_t seed = 0;
  PathProfile path;
  std::vector<Obstacle> obstacles;
  double v0 = 0.0;  // m/s, >= 0
  double a0 = 0.0;  // m/s^2
  double s0 = 0.0;  // initial station, canonically 0
  std::vector<double> time_grid;  // exactly 18 points, t_0 = 0

  void Validate() const;
  double Dt() const { return time_grid[1] - time_grid[0]; }
  // Uniform spacing is required by the lattice planner; tolerance 1e-9.
  bool UniformGrid() const;
};

struct TrajectoryPoint {
  double t = 0.0;  // s
  double s = 0.0;  // m
  double v = 0.0;  // m/s, >= 0
  double a = 0.0;  // m/s^2
  double j = 0.0;  // m/s^3
};

enum class Provenance { kExpert, kSampled, kSelected };

std::string ToString(Provenance p);
Provenance ProvenanceFromString(const std::string& s);

// A speed profile sampled at the scenario's evaluation times. Station is
// non-decreasing (no reverse driving on the station-time graph) and point
// times equal the scenario grid exactly.
struct Trajectory {
  std::vector<TrajectoryPoint> points;
  Provenance provenance = Provenance::kSampled;

  void Validate(const Scenario& scenario) const;
};

using FeatureVector = std::array<double, kNumFeatures>;

// 18 x 21 features for one trajectory; row k corresponds to time_grid[k].
struct FeatureBlock {
  std::array<FeatureVector, kNumTimePoints> rows{};

  FeatureVector& operator[](int k) { return rows[static_cast<size_t>(k)]; }
  const FeatureVector& operator[](int k) const {
    return rows[static_cast<size_t>(k)];
  }
  bool operator==(const FeatureBlock&) const = default;
};

// JSON round trips. Field names are part of the on-disk format contract
// (see README, "Scenario files").
nlohmann::json ToJson(const PathProfile& path);
nlohmann::json ToJson(const Obstacle& obstacle);
nlohmann::json ToJson(const Scenario& scenario);
nlohmann::json ToJson(const Trajectory& trajectory);
PathProfile PathProfileFromJson(const nlohmann::json& j);
Obstacle ObstacleFromJson(const nlohmann::json& j, int num_times);
Scenario ScenarioFromJson(const nlohmann::json& j);
Trajectory TrajectoryFromJson(const nlohmann::json& j);

// Suite files hold a JSON array of scenarios. Loading validates every
// scenario; errors carry the scenario index.
void SaveSuite(const std::vector<Scenario>& suite, const std::string& path);
std::vector<Scenario> LoadSuite(const std::string& path);

}  // namespace autotune

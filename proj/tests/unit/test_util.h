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

#include <vector>

#include "autotune/scenario.h"

namespace autotune::testutil {

inline std::vector<double> HalfSecondGrid() {
  std::vector<double> grid(kNumTimePoints);
  for (int k = 0; k < kNumTimePoints; ++k) grid[static_cast<size_t>(k)] = 0.5 * k;
  return grid;
}

// Straight flat path: zero curvature and lane offset, constant limit.
inline PathProfile StraightPath(double length = 256.0, double speed_limit = 10.0) {
  PathProfile p;
  p.station = {0.0, length};
  p.curvature = {0.0, 0.0};
  p.speed_limit = {speed_limit, speed_limit};
  p.l = {0.0, 0.0};
  p.dl = {0.0, 0.0};
  p.ddl = {0.0, 0.0};
  return p;
}

inline Scenario BareScenario(double v0 = 10.0, double speed_limit = 10.0) {
  Scenario sc;
  sc.id = "test_0000";
  sc.seed = 7;
  sc.path = StraightPath(256.0, speed_limit);
  sc.v0 = v0;
  sc.a0 = 0.0;
  sc.s0 = 0.0;
  sc.time_grid = HalfSecondGrid();
  return sc;
}

// Constant-speed trajectory on the grid; station/time values stay dyadic
// for exact-arithmetic assertions.
inline Trajectory ConstantSpeedTrajectory(const Scenario& sc, double v) {
  Trajectory tr;
  tr.provenance = Provenance::kSampled;
  tr.points.resize(kNumTimePoints);
  for (int k = 0; k < kNumTimePoints; ++k) {
    double t = sc.time_grid[static_cast<size_t>(k)];
    tr.points[static_cast<size_t>(k)] = {t, sc.s0 + v * t, v, 0.0, 0.0};
  }
  return tr;
}

// Follow/overtake occupancy built from constant-velocity kinematics.
inline Obstacle ConstantVelocityObstacle(ObstacleKind kind, double s_rear0, double length,
                                         double speed, const std::vector<double>& grid) {
  Obstacle ob;
  ob.kind = kind;
  ob.slices.resize(grid.size());
  for (size_t k = 0; k < grid.size(); ++k) {
    double rear = s_rear0 + speed * grid[k];
    ob.slices[k] = StSlice{rear, rear + length, speed};
  }
  return ob;
}

}  // namespace autotune::testutil
